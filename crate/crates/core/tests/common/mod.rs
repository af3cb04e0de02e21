#![allow(dead_code)]

use std::sync::OnceLock;

use unital::{enumerate, UnitalSet};

static SETS: [OnceLock<UnitalSet>; 4] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// U_n for n in 1..=4, computed once per test binary.
pub fn set(n: u32) -> &'static UnitalSet {
    SETS[(n - 1) as usize].get_or_init(|| enumerate(n))
}
