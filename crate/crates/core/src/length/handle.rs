//! Dehornoy handle reduction.
//!
//! A `σ_i`-handle is a subword `σ_i^e v σ_i^{-e}` where `v` only uses
//! generators `σ_j` with `j > i`. Reducing it deletes the outer letters and
//! replaces each `σ_{i+1}^d` in `v` by `σ_{i+1}^{-e} σ_i^d σ_{i+1}^e`.
//! The handle whose right end is leftmost never contains a nested
//! `σ_{i+1}`-handle, so it is always safe to reduce first.

/// Limits on intermediate growth; reduction gives up when either is hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandleCaps {
    pub max_steps: usize,
    pub max_len_factor: usize,
}

impl Default for HandleCaps {
    fn default() -> Self {
        HandleCaps { max_steps: 200_000, max_len_factor: 8 }
    }
}

/// Returns a handle-free word equal to `word`, or `None` if the caps were hit.
pub fn handle_reduce(word: &[i8], caps: HandleCaps) -> Option<Vec<i8>> {
    let mut w = word.to_vec();
    let max_len = word.len().max(16) * caps.max_len_factor;
    let mut steps = 0usize;
    let mut scan = 0usize;
    loop {
        let Some((start, end)) = find_handle(&w, scan) else {
            return Some(w);
        };
        steps += 1;
        if steps > caps.max_steps {
            return None;
        }
        let e = w[start];
        let i = e.unsigned_abs() as i8;
        let sign = e.signum();
        let mut replacement = Vec::with_capacity(end - start);
        for &x in &w[start + 1..end] {
            if x.unsigned_abs() as i8 == i + 1 {
                replacement.extend_from_slice(&[-sign * (i + 1), x.signum() * i, sign * (i + 1)]);
            } else {
                replacement.push(x);
            }
        }
        w.splice(start..=end, replacement);
        if w.len() > max_len {
            return None;
        }
        // nothing before `start` changed, and no handle ended there
        scan = start;
    }
}

/// Finds the handle with the leftmost right end at or after `from`.
fn find_handle(w: &[i8], from: usize) -> Option<(usize, usize)> {
    // last[i]: latest position seen so far holding a letter of index i
    let mut last = [-1i32; 33];
    for (pos, &e) in w[..from].iter().enumerate() {
        last[e.unsigned_abs() as usize] = pos as i32;
    }
    for (j, &e) in w.iter().enumerate().skip(from) {
        let i = e.unsigned_abs() as usize;
        let k = last[1..=i].iter().copied().max().unwrap_or(-1);
        if k >= 0 && w[k as usize] == -e {
            return Some((k as usize, j));
        }
        last[i] = j as i32;
    }
    None
}

#[cfg(test)]
pub(crate) fn is_handle_free(w: &[i8]) -> bool {
    find_handle(w, 0).is_none()
}
