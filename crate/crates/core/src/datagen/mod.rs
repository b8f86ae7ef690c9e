//! Seeded synthetic market panels and the panel CSV format.

mod csv_io;
mod generator;

pub use csv_io::{read_panel, read_panel_from, write_panel, write_panel_to, PANEL_COLUMNS};
pub use generator::{generate_panel, GeneratorConfig};
