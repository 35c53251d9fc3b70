//! Holds the acceptance suite in `tests/acceptance.rs`. The package sorts
//! after the library and the binary, so the suite runs last in a workspace
//! test run.
