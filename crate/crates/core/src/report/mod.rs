//! Rendering of comparison tables and growth-curve figures.

mod plot;
mod table;

pub use plot::{render_plot, PlotScale, PlotSpec};
pub use table::{format_count, render_table, TableFormat};
