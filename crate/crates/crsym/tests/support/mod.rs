pub mod su_matrix;
pub mod properties;
