//! Acceptance checks for `gcoda` live in `tests/acceptance.rs`; run them with
//! `cargo test -p gcoda-validation --test acceptance`.
