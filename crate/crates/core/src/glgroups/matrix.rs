//! Square matrices over `F_q`.

use crate::error::{Error, Result};
use crate::glgroups::field::{Elem, Fq};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GLMat {
    d: usize,
    /// Row-major.
    e: Vec<Elem>,
}

impl GLMat {
    pub fn zero(d: usize) -> Self {
        GLMat { d, e: vec![0; d * d] }
    }

    pub fn identity(d: usize) -> Self {
        Self::scalar(d, 1)
    }

    pub fn scalar(d: usize, c: Elem) -> Self {
        let mut m = Self::zero(d);
        for i in 0..d {
            m.e[i * d + i] = c;
        }
        m
    }

    pub fn diag(c: &[Elem]) -> Self {
        let mut m = Self::zero(c.len());
        for (i, &x) in c.iter().enumerate() {
            m.e[i * c.len() + i] = x;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Self {
        let d = rows.len();
        assert!(rows.iter().all(|r| r.len() == d), "matrix must be square");
        GLMat { d, e: rows.concat() }
    }

    /// The `index`-th matrix in base-`q` order of the row-major entries.
    pub fn from_index(d: usize, q: u32, mut index: u64) -> Self {
        let mut e = vec![0; d * d];
        for x in e.iter_mut() {
            *x = (index % q as u64) as u32;
            index /= q as u64;
        }
        GLMat { d, e }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.e[i * self.d + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Elem) {
        self.e[i * self.d + j] = c;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.e
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.e.chunks(self.d).map(<[Elem]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.d).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, f: &Fq, o: &GLMat) -> GLMat {
        let d = self.d;
        let mut out = GLMat::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.e[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let idx = i * d + j;
                    out.e[idx] = f.add(out.e[idx], f.mul(a, o.e[k * d + j]));
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &Fq, v: &[Elem]) -> Vec<Elem> {
        (0..self.d).map(|i| (0..self.d).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))).collect()
    }

    pub fn pow(&self, f: &Fq, mut e: u64) -> GLMat {
        let mut base = self.clone();
        let mut acc = GLMat::identity(self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == GLMat::identity(self.d)
    }

    /// Determinant and inverse by Gauss-Jordan; the inverse is `None` when singular.
    fn gauss(&self, f: &Fq) -> (Elem, Option<GLMat>) {
        let d = self.d;
        let mut a = self.rows();
        let mut inv = GLMat::identity(d).rows();
        let mut det = 1;
        for c in 0..d {
            let Some(piv) = (c..d).find(|&r| a[r][c] != 0) else {
                return (0, None);
            };
            if piv != c {
                a.swap(piv, c);
                inv.swap(piv, c);
                det = f.neg(det);
            }
            let pc = a[c][c];
            det = f.mul(det, pc);
            let pinv = f.inv(pc).expect("pivot is nonzero");
            for j in 0..d {
                a[c][j] = f.mul(a[c][j], pinv);
                inv[c][j] = f.mul(inv[c][j], pinv);
            }
            for r in 0..d {
                if r != c && a[r][c] != 0 {
                    let m = a[r][c];
                    for j in 0..d {
                        a[r][j] = f.sub(a[r][j], f.mul(m, a[c][j]));
                        inv[r][j] = f.sub(inv[r][j], f.mul(m, inv[c][j]));
                    }
                }
            }
        }
        (det, Some(GLMat::from_rows(&inv)))
    }

    pub fn det(&self, f: &Fq) -> Elem {
        self.gauss(f).0
    }

    pub fn inverse(&self, f: &Fq) -> Result<GLMat> {
        self.gauss(f).1.ok_or(Error::NonUnit)
    }

    /// Order in `GL_d(F_q)`, searching up to `bound`.
    pub fn order(&self, f: &Fq, bound: u64) -> Option<u64> {
        let mut x = self.clone();
        for k in 1..=bound {
            if x.is_identity() {
                return Some(k);
            }
            x = x.mul(f, self);
        }
        None
    }
}

/// Basis of the null space of a `rows × cols` matrix over `F_q`.
pub fn null_space(f: &Fq, m: &[Vec<Elem>], cols: usize) -> Vec<Vec<Elem>> {
    let mut a: Vec<Vec<Elem>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(piv) = (row..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(piv, row);
        let pinv = f.inv(a[row][c]).expect("pivot is nonzero");
        for x in a[row].iter_mut() {
            *x = f.mul(*x, pinv);
        }
        for r in 0..a.len() {
            if r != row && a[r][c] != 0 {
                let k = a[r][c];
                for j in 0..cols {
                    let t = f.mul(k, a[row][j]);
                    a[r][j] = f.sub(a[r][j], t);
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[r][fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let f = Fq::new(4).unwrap();
        let m = GLMat::from_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![2, 0, 1]]);
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity());
        assert_ne!(m.det(&f), 0);
        let s = GLMat::from_rows(&[vec![1, 2], vec![1, 2]]);
        assert_eq!(s.det(&f), 0);
        assert!(s.inverse(&f).is_err());
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = Fq::new(5).unwrap();
        let m = vec![vec![1, 2, 3, 4], vec![0, 1, 1, 1]];
        let ns = null_space(&f, &m, 4);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &m {
                let s = row.iter().zip(&v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }
}
