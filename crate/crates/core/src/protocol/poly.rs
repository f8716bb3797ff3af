//! Dense univariate polynomials over `F_p`, just enough to sample monic
//! irreducible polynomials. Coefficients are stored lowest degree first.

use rand::Rng;

use crate::burau::{FpMatrix, PrimeField};

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn rem(a: &[u32], m: &[u32], f: PrimeField) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = f.mul(*r.last().unwrap(), lead_inv);
        for (k, &mk) in m.iter().enumerate() {
            r[shift + k] = f.sub(r[shift + k], f.mul(c, mk));
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u32], b: &[u32], m: &[u32], f: PrimeField) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    rem(&out, m, f)
}

fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], f: PrimeField) -> Vec<u32> {
    let mut acc = vec![1];
    let mut b = rem(base, m, f);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, m, f);
        }
        b = mul_mod(&b, &b, m, f);
        exp >>= 1;
    }
    acc
}

fn gcd(a: &[u32], b: &[u32], f: PrimeField) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, f);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: a monic `f` of degree `d` is irreducible iff
/// `gcd(x^{p^i} - x, f) = 1` for every `1 <= i <= d/2`.
pub fn is_irreducible(poly: &[u32], field: PrimeField) -> bool {
    let poly = trim(poly.to_vec());
    let d = poly.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if poly[0] == 0 {
        return false;
    }
    let p = field.modulus() as u64;
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = pow_mod(&xp, p, &poly, field);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = field.sub(diff[1], 1);
        let g = gcd(&poly, &diff, field);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Uniformly random monic irreducible polynomial of degree `n`.
pub fn random_irreducible<R: Rng + ?Sized>(n: usize, field: PrimeField, rng: &mut R) -> Vec<u32> {
    loop {
        let mut poly: Vec<u32> = (0..n).map(|_| rng.gen_range(0..field.modulus())).collect();
        poly.push(1);
        if is_irreducible(&poly, field) {
            return poly;
        }
    }
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal and
/// `-c_0, …, -c_{n-1}` in the last column. Its characteristic polynomial is
/// the input.
pub fn companion_matrix(poly: &[u32], field: PrimeField) -> FpMatrix {
    let n = poly.len() - 1;
    let mut m = FpMatrix::zero(n, field);
    for i in 1..n {
        m.set(i, i - 1, 1);
    }
    for (i, &c) in poly[..n].iter().enumerate() {
        m.set(i, n - 1, field.neg(c));
    }
    m
}

/// A matrix with irreducible characteristic polynomial, as the companion
/// matrix of a random monic irreducible polynomial.
pub fn random_m0<R: Rng + ?Sized>(n: usize, field: PrimeField, rng: &mut R) -> FpMatrix {
    companion_matrix(&random_irreducible(n, field, rng), field)
}

/// `Σ c_k m^k`, Horner style.
pub fn eval_at_matrix(poly: &[u32], m: &FpMatrix) -> FpMatrix {
    let field = m.field();
    let mut acc = FpMatrix::zero(m.size(), field);
    for &c in poly.iter().rev() {
        acc = acc.mul(m).add(&FpMatrix::identity(m.size(), field).scale(c));
    }
    acc
}
