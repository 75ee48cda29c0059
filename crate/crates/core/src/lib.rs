pub mod construct;
pub mod numerics;
pub mod scatter;
pub mod verify;
pub mod jobs;
