//! Character values via simultaneous eigenvectors of the class matrices over
//! a prime field `F_ℓ` with `ℓ ≡ 1 (mod e)`, lifted by summing over powers.

use num_rational::Rational64;

use crate::cyclotomic::Cyclotomic;
use crate::permgroup::{is_prime, PermutationGroup};

/// Group data shared by all attempts with different moduli.
pub(super) struct ClassData {
    order: u64,
    exponent: u32,
    sizes: Vec<u64>,
    inverse_class: Vec<usize>,
    /// `power_class[k][j]` is the class of `rep_k^j`, `0 <= j < ord(rep_k)`.
    power_class: Vec<Vec<usize>>,
    /// `structure[j][k][l]` counts `(x, y)` in `C_j x C_k` with `xy = rep_l`.
    structure: Vec<Vec<Vec<u64>>>,
}

impl ClassData {
    pub(super) fn new(g: &PermutationGroup) -> Self {
        let cc = g.conjugacy_classes();
        let r = cc.len();
        let n = g.elements().len();
        let mut structure = vec![vec![vec![0u64; r]; r]; r];
        for (l, c) in cc.classes().iter().enumerate() {
            for x in 0..n {
                let y = g.mul(g.inverse_index(x), c.rep_index);
                structure[cc.class_index(x)][cc.class_index(y)][l] += 1;
            }
        }
        let power_class = cc
            .classes()
            .iter()
            .map(|c| {
                let mut out = Vec::with_capacity(c.element_order as usize);
                let mut x = 0;
                for _ in 0..c.element_order {
                    out.push(cc.class_index(x));
                    x = g.mul(x, c.rep_index);
                }
                out
            })
            .collect();
        ClassData {
            order: g.order(),
            exponent: g.exponent() as u32,
            sizes: cc.sizes(),
            inverse_class: cc
                .classes()
                .iter()
                .map(|c| cc.class_index(g.inverse_index(c.rep_index)))
                .collect(),
            power_class,
            structure,
        }
    }

    pub(super) fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Smallest prime `ℓ > start` with `ℓ ≡ 1 (mod e)` and `ℓ^2 > 4|G|`.
    pub(super) fn next_modulus(&self, start: u64) -> u64 {
        let e = self.exponent as u64;
        let mut l = start + 1;
        loop {
            if l % e == 1 % e && l * l > 4 * self.order && is_prime(l) {
                return l;
            }
            l += 1;
        }
    }
}

fn pow_mod(mut b: u64, mut x: u64, l: u64) -> u64 {
    let mut acc = 1 % l;
    b %= l;
    while x > 0 {
        if x & 1 == 1 {
            acc = acc * b % l;
        }
        b = b * b % l;
        x >>= 1;
    }
    acc
}

fn inv_mod(a: u64, l: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(l));
    pow_mod(a, l - 2, l)
}

fn primitive_root(l: u64) -> u64 {
    let qs: Vec<u64> = crate::permgroup::factorize(l - 1).into_iter().map(|(q, _)| q).collect();
    (2..l)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (l - 1) / q, l) != 1))
        .unwrap_or(1)
}

/// Reduced row echelon form in place; zero rows are dropped. Returns pivots.
fn rref(rows: &mut Vec<Vec<u64>>, l: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = inv_mod(rows[r][c], l);
        for x in rows[r].iter_mut() {
            *x = *x * inv % l;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + l - f * y % l) % l;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : m x = 0}` for a square matrix `m`.
fn nullspace(m: Vec<Vec<u64>>, l: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut rows = m;
    let pivots = rref(&mut rows, l);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = (l - rows[i][free]) % l;
        }
        basis.push(v);
    }
    basis
}

/// One attempt with modulus `l`; `None` when eigenspaces fail to split or
/// the lift is inconsistent.
pub(super) fn attempt(data: &ClassData, l: u64) -> Option<Vec<Vec<Cyclotomic>>> {
    let r = data.sizes.len();
    let e = data.exponent as u64;

    // Common eigenspaces of the class matrices, each kept as an RREF basis.
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect()];
    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            let d = space.len();
            if d == 1 {
                next.push(space);
                continue;
            }
            let mut pivots = space.clone();
            let pivots = rref(&mut pivots, l);
            // x -> x A in basis coordinates, A[i][t] = t-th coordinate of M_j b_i.
            let a: Vec<Vec<u64>> = space
                .iter()
                .map(|b| {
                    let image: Vec<u64> = (0..r)
                        .map(|k| {
                            (0..r).fold(0u64, |acc, m| (acc + data.structure[j][k][m] % l * b[m]) % l)
                        })
                        .collect();
                    pivots.iter().map(|&p| image[p]).collect()
                })
                .collect();
            let mut found = 0;
            for lambda in 0..l {
                // Left eigenvectors: nullspace of (A - λI)^T.
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|t| {
                        (0..d)
                            .map(|i| {
                                let v = a[i][t];
                                if i == t {
                                    (v + l - lambda) % l
                                } else {
                                    v
                                }
                            })
                            .collect()
                    })
                    .collect();
                let kernel = nullspace(shifted, l);
                if kernel.is_empty() {
                    continue;
                }
                found += kernel.len();
                let mut sub: Vec<Vec<u64>> = kernel
                    .iter()
                    .map(|x| {
                        (0..r)
                            .map(|c| (0..d).fold(0u64, |acc, i| (acc + x[i] * space[i][c]) % l))
                            .collect()
                    })
                    .collect();
                rref(&mut sub, l);
                next.push(sub);
                if found == d {
                    break;
                }
            }
            if found != d {
                return None;
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return None;
    }

    let z = pow_mod(primitive_root(l), (l - 1) / e, l);
    let z_inv = inv_mod(z, l);
    let e_inv = inv_mod(e % l, l);
    let order = data.order;
    let mut rows = Vec::with_capacity(r);
    for space in spaces {
        let w0 = space[0][0];
        if w0 == 0 {
            return None;
        }
        let scale = inv_mod(w0, l);
        let w: Vec<u64> = space[0].iter().map(|&x| x * scale % l).collect();
        let s = (0..r).fold(0u64, |acc, k| {
            (acc + w[k] * w[data.inverse_class[k]] % l * inv_mod(data.sizes[k] % l, l)) % l
        });
        if s == 0 {
            return None;
        }
        let target = order % l * inv_mod(s, l) % l;
        let degree = (1..).take_while(|d| d * d <= order).find(|&d| order.is_multiple_of(d) && d * d % l == target)?;
        let chi: Vec<u64> = (0..r)
            .map(|k| degree % l * w[k] % l * inv_mod(data.sizes[k] % l, l) % l)
            .collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let powers = &data.power_class[k];
            let o = powers.len() as u64;
            let mut mults = Vec::with_capacity(e as usize);
            for s in 0..e {
                let zs = pow_mod(z_inv, s, l);
                let mut acc = 0u64;
                let mut zsj = 1u64;
                for j in 0..e {
                    acc = (acc + chi[powers[(j % o) as usize]] * zsj) % l;
                    zsj = zsj * zs % l;
                }
                let m = acc * e_inv % l;
                if m > degree {
                    return None;
                }
                mults.push(m);
            }
            if mults.iter().sum::<u64>() != degree {
                return None;
            }
            row.push(Cyclotomic::from_powers(
                data.exponent,
                mults
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .map(|(s, &m)| (s as u64, Rational64::from_integer(m as i64))),
            ));
        }
        rows.push(row);
    }
    Some(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        assert_eq!(primitive_root(7), 3);
        assert_eq!(pow_mod(3, 6, 7), 1);
        assert_eq!(inv_mod(3, 7), 5);
        let ns = nullspace(vec![vec![1, 1], vec![1, 1]], 5);
        assert_eq!(ns, vec![vec![4, 1]]);
    }

    #[test]
    fn modulus_choice() {
        let g = crate::permgroup::catalog_group("A4").unwrap();
        let data = ClassData::new(&g);
        // e = 6, 4|G| = 48: first prime ≡ 1 mod 6 with ℓ^2 > 48 is 7
        assert_eq!(data.next_modulus(0), 7);
        assert_eq!(data.next_modulus(7), 13);
    }
}
