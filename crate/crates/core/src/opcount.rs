//! Coarse per-thread counter of field multiplications.
//!
//! Kernels add their operation count in bulk (one call per matrix product,
//! elimination or polynomial product), so the counter is an estimate that is
//! cheap enough to leave enabled. The benchmark harness reads it.

use std::cell::Cell;

thread_local! {
    static COUNT: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn add(n: u64) {
    COUNT.with(|c| c.set(c.get().wrapping_add(n)));
}

pub fn get() -> u64 {
    COUNT.with(|c| c.get())
}

pub fn reset() {
    COUNT.with(|c| c.set(0));
}

/// Runs `f` and returns its result with the number of operations it counted.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = get();
    let out = f();
    (out, get().wrapping_sub(before))
}
