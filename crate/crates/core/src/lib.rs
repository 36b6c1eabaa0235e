pub mod ratfield;
pub mod certificate;
pub mod linsys;
pub mod transform;
pub mod asymlp;
pub mod decide;
pub mod report;
pub mod testgen;
pub mod selftest;
