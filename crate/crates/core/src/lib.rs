//! Abstract numeration systems on regular languages.

pub mod automata;
pub mod counting;
pub mod growth;
pub mod ans;
pub mod codec;
pub mod cli;
