//! Support library for the `gradehom` binary: file formats, report schema,
//! and the built-in corpus.
