//! File formats: delimited matrices, GMT gene sets, edge lists, and the
//! JSON decomposition record.

mod group_file;
mod matrix_file;
mod record;

pub use group_file::{read_edge_list, read_gmt, write_gmt, EdgeListGroups, GmtGroups};
pub use matrix_file::{
    normalize_columns, read_matrix, write_matrix, LabeledMatrix, MatrixFormat, Orientation,
};
pub use record::{read_record, write_record, DecompositionRecord, FactorRecord};
