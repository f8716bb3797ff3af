use crate::braid::BraidWord;
use crate::length::LengthOracle;

/// Walks `w` through its coset `⟨Δ²⟩·w` towards the shortest element under
/// the approximate length, stepping by `Δ^{∓2}` while the length strictly
/// drops. Returns the reduced witness `u` and the power `k` with
/// `u = Δ^{-2k}·w`.
///
/// Each coset element is handed to the oracle as the mixed word `N^{-1}·P`
/// of its normal form (the input word itself competes at `k = 0`). Prefixing
/// `Δ^{∓2}` letters instead leaves the oracle long runs of half twists to
/// untangle, and it visibly fails to once the conjugator is long.
pub fn recover_delta_power(oracle: &LengthOracle, w: &BraidWord) -> (BraidWord, i64) {
    let n = w.strands();
    let nf = w.normal_form();
    let score = |k: i64| -> Vec<i8> {
        let reduced = oracle.reduce(n, nf.shift_delta(-2 * k).mixed_word().letters());
        if k == 0 {
            let direct = oracle.reduce(n, w.letters());
            if direct.len() < reduced.len() {
                return direct;
            }
        }
        reduced
    };

    let mut k = 0i64;
    let mut u = score(0);
    let mut direction = 0i64;
    loop {
        let mut moved = false;
        for step in [1i64, -1] {
            if direction == -step {
                continue;
            }
            let cand = score(k + step);
            if cand.len() < u.len() {
                u = cand;
                k += step;
                direction = step;
                moved = true;
                break;
            }
        }
        if !moved {
            return (BraidWord::from_raw(n, u), k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word() {
        let (u, k) = recover_delta_power(&LengthOracle::default(), &BraidWord::identity(6));
        assert!(u.is_empty());
        assert_eq!(k, 0);
    }

    #[test]
    fn strips_a_full_twist() {
        let n = 6;
        let d = BraidWord::half_twist_word(n);
        let w = d.mult(&d).mult(&BraidWord::new(n, vec![1, 2]).unwrap());
        let (u, k) = recover_delta_power(&LengthOracle::default(), &w);
        assert_eq!(k, 1);
        assert!(u.equivalent(&BraidWord::new(n, vec![1, 2]).unwrap()));
    }

    #[test]
    fn adds_back_a_negative_twist() {
        let n = 7;
        let d = BraidWord::half_twist_word(n).invert();
        let w = d.mult(&d).mult(&BraidWord::new(n, vec![3, -4, 5]).unwrap());
        let (u, k) = recover_delta_power(&LengthOracle::default(), &w);
        assert_eq!(k, -1);
        assert!(u.equivalent(&BraidWord::new(n, vec![3, -4, 5]).unwrap()));
    }
}
