pub mod charoracle;
pub mod ffgroup;
pub mod polycount;
pub mod rootsys;
pub mod superalg;
