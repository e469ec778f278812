pub mod chronos;
pub mod context;
pub mod effector;
pub mod graph;
pub mod kb;
pub mod lexicon;
pub mod mephisto;
pub mod parser;
pub mod session;
pub mod surface;
