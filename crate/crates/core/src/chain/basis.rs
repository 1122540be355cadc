//! Tensor basis of `(C^{2|1})^{⊗m}` encoded as base-3 integers, and the
//! Koszul-signed transposition of two tensor factors.
//!
//! Basis labels are 0-based digits (`0,1,2` for `e_1,e_2,e_3`); the digit at
//! position `p` is the `p`-th tensor factor counted from the left.

/// `[1] = [2] = 0`, `[3] = 1` on 1-based labels.
pub fn parity(label: usize) -> u8 {
    debug_assert!((1..=3).contains(&label));
    u8::from(label == 3)
}

/// Parity of a 0-based digit.
#[inline]
pub fn digit_parity(d: u8) -> u8 {
    u8::from(d == 2)
}

/// Operator parity `[T_ij] = [i] + [j] mod 2`.
pub fn op_parity(i: usize, j: usize) -> u8 {
    (parity(i) + parity(j)) % 2
}

/// `(-1)^k`.
#[inline]
pub fn sign_of(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub const POW3: [u64; 21] = {
    let mut p = [1u64; 21];
    let mut k = 1;
    while k < 21 {
        p[k] = p[k - 1] * 3;
        k += 1;
    }
    p
};

#[inline]
pub fn digit(key: u64, pos: usize) -> u8 {
    ((key / POW3[pos]) % 3) as u8
}

#[inline]
pub fn set_digit(key: u64, pos: usize, d: u8) -> u64 {
    key - digit(key, pos) as u64 * POW3[pos] + d as u64 * POW3[pos]
}

/// Number of odd factors strictly between positions `lo` and `hi`.
#[inline]
pub fn odd_between(key: u64, lo: usize, hi: usize) -> u32 {
    (lo + 1..hi).map(|p| digit_parity(digit(key, p)) as u32).sum()
}

/// Graded transposition of factors `p < q` applied to a basis vector:
/// returns the new key and the sign
/// `(-1)^{[a][b] + ([a]+[b]) * (number of odd factors between)}`
/// where `a`, `b` are the swapped labels.
pub fn graded_swap(key: u64, p: usize, q: usize) -> (u64, i64) {
    debug_assert!(p < q);
    let (a, b) = (digit(key, p), digit(key, q));
    let (pa, pb) = (digit_parity(a) as u32, digit_parity(b) as u32);
    let mut exponent = pa * pb;
    if pa + pb == 1 {
        exponent += odd_between(key, p, q);
    }
    let swapped = set_digit(set_digit(key, p, b), q, a);
    (swapped, sign_of(exponent))
}

/// Key of the basis vector with the given 0-based digits, first digit at position 0.
pub fn key_of(digits: &[u8]) -> u64 {
    digits.iter().enumerate().map(|(p, &d)| d as u64 * POW3[p]).sum()
}

pub fn digits_of(key: u64, len: usize) -> Vec<u8> {
    (0..len).map(|p| digit(key, p)).collect()
}
