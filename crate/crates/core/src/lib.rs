pub mod field;
pub mod model;
pub mod pradical;
pub mod series;
pub mod tower;
pub mod verify;
