//! File formats and commands for the `smoothjoin` tool.
//!
//! Grid files are JSON:
//!
//! ```json
//! {
//!   "patches": [
//!     {"id": "S", "base": ["0", "0"], "blocks": [[["-1", "0"]], [["0", "1"]]], "degrees": [2, 2]},
//!     {"id": "T", "base": ["0", "0"], "blocks": [[["0", "1"], ["1", "0"]]], "degrees": [2]}
//!   ],
//!   "adjacencies": "auto",
//!   "order": 1
//! }
//! ```

pub mod commands;
pub mod error;
pub mod grid;
pub mod json;

pub use error::CliError;
pub use grid::GridFile;
