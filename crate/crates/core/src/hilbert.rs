//! Hilbert symbols `(a, b)_v` over Q.

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Prime(i64),
    Infinity,
}

fn pow_mod(mut b: i128, mut e: i128, m: i128) -> i128 {
    let mut r = 1i128;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(u/p)` for odd prime `p ∤ u`.
fn legendre(u: i64, p: i64) -> i32 {
    if pow_mod(u as i128, ((p - 1) / 2) as i128, p as i128) == 1 {
        1
    } else {
        -1
    }
}

fn split(mut a: i64, p: i64) -> (u32, i64) {
    let mut k = 0;
    while a % p == 0 {
        a /= p;
        k += 1;
    }
    (k, a)
}

/// `(a, b)_p` for a prime `p` and nonzero integers `a`, `b`.
pub fn hilbert_symbol(a: i64, b: i64, p: i64) -> i32 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    let (al, u) = split(a, p);
    let (be, v) = split(b, p);
    if p == 2 {
        let eps = |x: i64| (x.rem_euclid(4) == 3) as u32;
        let omega = |x: i64| matches!(x.rem_euclid(8), 3 | 5) as u32;
        let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (al * be) % 2 == 1 && (p - 1) / 2 % 2 == 1 {
            -1
        } else {
            1
        };
        if be % 2 == 1 {
            s *= legendre(u, p);
        }
        if al % 2 == 1 {
            s *= legendre(v, p);
        }
        s
    }
}

pub fn hilbert_symbol_at(a: i64, b: i64, v: Place) -> i32 {
    match v {
        Place::Prime(p) => hilbert_symbol(a, b, p),
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
    }
}
