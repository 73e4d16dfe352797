//! File formats, the built-in corpus, SVG output and the command line.

pub mod cli;
pub mod corpus;
pub mod file;
pub mod render;
pub mod suite;

pub use corpus::{corpus, iterated_cable, random_word, word_from_choices};
pub use file::{CurveFile, RationalStr};
pub use render::{render_svg, RenderOptions, View};
