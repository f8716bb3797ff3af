//! Length-reducing local rewrites: cancellation modulo far commutation, and
//! braid-relation rewrites of (possibly non-adjacent) triples that expose
//! such a cancellation.

#[inline]
fn commute(x: i8, y: i8) -> bool {
    (x.unsigned_abs() as i16 - y.unsigned_abs() as i16).abs() >= 2
}

/// Cancels `x … x^{-1}` whenever every letter in between commutes with `x`,
/// iterated until no such pair is left.
pub(crate) fn slide_cancel(letters: &[i8]) -> Vec<i8> {
    let mut cur = slide_once(letters);
    loop {
        let next = slide_once(&cur);
        if next.len() == cur.len() {
            return cur;
        }
        cur = next;
    }
}

fn slide_once(letters: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::with_capacity(letters.len());
    'letters: for &x in letters {
        let mut p = out.len();
        while p > 0 {
            let y = out[p - 1];
            if y == -x {
                out.remove(p - 1);
                continue 'letters;
            }
            if !commute(x, y) {
                break;
            }
            p -= 1;
        }
        out.push(x);
    }
    out
}

/// Rewrites `σ_i^e σ_j^f σ_i^g` (|i-j| = 1) with a braid relation, if one
/// applies.
fn relation(a: i8, b: i8, c: i8) -> Option<[i8; 3]> {
    let (i, j) = (a.unsigned_abs() as i8, b.unsigned_abs() as i8);
    if c.unsigned_abs() as i8 != i || (i - j).abs() != 1 {
        return None;
    }
    let (e, f, g) = (a.signum(), b.signum(), c.signum());
    if e == f && f == g {
        Some([f * j, f * i, f * j])
    } else if g == -e {
        Some([-e * j, f * i, e * j])
    } else {
        None
    }
}

/// One greedy sweep over start positions in `order`; applies the first
/// relation rewrite (within `window` letters) that shortens the word after
/// [`slide_cancel`]. Returns whether the word changed.
pub(crate) fn relation_pass(w: &mut Vec<i8>, window: usize, order: &[usize]) -> bool {
    let len = w.len();
    for &p in order {
        if p >= len {
            continue;
        }
        let a = w[p];
        let far = (p + window).min(len - 1);
        for q in p + 1..=far {
            let b = w[q];
            if (a.unsigned_abs() as i16 - b.unsigned_abs() as i16).abs() != 1 {
                continue;
            }
            if !w[p + 1..q].iter().all(|&x| commute(x, b)) {
                continue;
            }
            for r in q + 1..=far {
                let c = w[r];
                if c.unsigned_abs() != a.unsigned_abs() {
                    continue;
                }
                let between_ok = w[p + 1..r]
                    .iter()
                    .enumerate()
                    .all(|(off, &x)| p + 1 + off == q || commute(x, c));
                if !between_ok {
                    continue;
                }
                let Some(rewritten) = relation(a, b, c) else {
                    continue;
                };
                let mut candidate = Vec::with_capacity(len);
                candidate.extend_from_slice(&w[..p]);
                candidate.extend_from_slice(&rewritten);
                candidate.extend(
                    w[p + 1..r]
                        .iter()
                        .enumerate()
                        .filter(|(off, _)| p + 1 + off != q)
                        .map(|(_, &x)| x),
                );
                candidate.extend_from_slice(&w[r + 1..]);
                let reduced = slide_cancel(&candidate);
                if reduced.len() < len {
                    *w = reduced;
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    fn equivalent(n: usize, a: &[i8], b: &[i8]) -> bool {
        BraidWord::new(n, a.to_vec()).unwrap().equivalent(&BraidWord::new(n, b.to_vec()).unwrap())
    }

    #[test]
    fn slide_cancel_through_commuting_letters() {
        assert_eq!(slide_cancel(&[1, 3, 5, -1]), vec![3, 5]);
        assert_eq!(slide_cancel(&[1, 2, -1]), vec![1, 2, -1]);
        // cancelling the inner pair frees the outer one
        assert_eq!(slide_cancel(&[1, 4, 2, -4, -1]), vec![1, 2, -1]);
        assert_eq!(slide_cancel(&[2, 4, 1, -4, -1, -2]), Vec::<i8>::new());
    }

    #[test]
    fn relations_are_valid() {
        for a in [-2i8, 2] {
            for b in [-3i8, -1, 1, 3] {
                for c in [-2i8, 2] {
                    if let Some(r) = relation(a, b, c) {
                        assert!(equivalent(5, &[a, b, c], &r), "{a} {b} {c} -> {r:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn relation_pass_shortens() {
        // σ_1 σ_2 σ_1 σ_2^{-1} = σ_2 σ_1
        let mut w = vec![1, 2, 1, -2];
        let order: Vec<usize> = (0..w.len()).collect();
        assert!(relation_pass(&mut w, 4, &order));
        assert_eq!(w.len(), 2);
        assert!(equivalent(3, &w, &[2, 1]));
        // nothing to do on a short positive word
        let mut w = vec![1, 2];
        assert!(!relation_pass(&mut w, 4, &[0, 1]));
    }

    #[test]
    fn relation_pass_across_commuting_gap() {
        // σ_2 σ_4 σ_1 σ_2 σ_1^{-1}: σ_4 sits inside the triple window
        let mut w = vec![-1, 2, 4, 1, -2, 3];
        let before = w.clone();
        let order: Vec<usize> = (0..w.len()).collect();
        while relation_pass(&mut w, 4, &order) {}
        assert!(w.len() <= before.len());
        assert!(equivalent(5, &w, &before));
    }
}
