#![allow(dead_code)]

pub mod subproblems;
pub mod vertex;
