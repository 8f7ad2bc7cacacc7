//! Machine-word modular arithmetic for the residue-bucket sweeps. The
//! exact BigRational paths in sdioph-core stay authoritative; these
//! kernels only have to agree with them on inputs that fit i64.

/// p-adic valuation of a nonzero machine integer.
pub fn val(mut x: i64, p: i64) -> u32 {
    debug_assert!(x != 0 && p >= 2);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Inverse of a modulo m, for m >= 1 and gcd(a, m) = 1.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a.rem_euclid(m)) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as i64)
}

/// (a * b) mod m without overflow for m < 2^62.
pub fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}
