//! Small dense square matrices over a complex scalar.
//!
//! Sizes are fixed at compile time (2x2 Pauli, 3x3 spin-1, 4x4 Dirac
//! blocks). All products are written out as plain row-column sums so the
//! verifiers stay close to the algebra they check.

use super::scalar::ComplexScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T, const N: usize> {
    entries: [[T; N]; N],
}

impl<T: ComplexScalar, const N: usize> Matrix<T, N> {
    pub fn from_rows(entries: [[T; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Self {
            entries: std::array::from_fn(|r| std::array::from_fn(|c| f(r, c))),
        }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|r, c| {
            if r == c {
                T::from_ints(1, 0)
            } else {
                T::zero()
            }
        })
    }

    /// s * I
    pub fn scaled_identity(s: &T) -> Self {
        Self::from_fn(|r, c| if r == c { s.clone() } else { T::zero() })
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r][c]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_fn(|r, c| self.entries[r][c].clone() + rhs.entries[r][c].clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::from_fn(|r, c| self.entries[r][c].clone() - rhs.entries[r][c].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_fn(|r, c| s.clone() * self.entries[r][c].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_fn(|r, c| {
            let mut acc = T::zero();
            for k in 0..N {
                acc = acc + self.entries[r][k].clone() * rhs.entries[k][c].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T; N]) -> [T; N] {
        std::array::from_fn(|r| {
            let mut acc = T::zero();
            for (entry, component) in self.entries[r].iter().zip(v) {
                acc = acc + entry.clone() * component.clone();
            }
            acc
        })
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).sub(&b.mul(a))
    }

    pub fn conjugate_transpose(&self) -> Self {
        Self::from_fn(|r, c| self.entries[c][r].conj())
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.conjugate_transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.entries
            .iter()
            .all(|row| row.iter().all(|e| e.is_zero()))
    }

    /// Largest entry magnitude, for residual reporting.
    pub fn max_magnitude(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|row| row.iter())
            .map(|e| e.magnitude())
            .fold(0.0, f64::max)
    }
}

/// Bilinear dot product (no conjugation), as in p . S and p . v.
pub fn vec3_dot<T: ComplexScalar>(a: &[T; 3], b: &[T; 3]) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn vec3_cross<T: ComplexScalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn vec3_scale<T: ComplexScalar>(s: &T, v: &[T; 3]) -> [T; 3] {
    std::array::from_fn(|j| s.clone() * v[j].clone())
}

pub fn vec3_sub<T: ComplexScalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    std::array::from_fn(|j| a[j].clone() - b[j].clone())
}

pub fn vec3_is_zero<T: ComplexScalar>(v: &[T; 3]) -> bool {
    v.iter().all(|e| e.is_zero())
}

pub fn vec3_max_magnitude<T: ComplexScalar>(v: &[T; 3]) -> f64 {
    v.iter().map(|e| e.magnitude()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::ExactComplex;

    type M2 = Matrix<ExactComplex, 2>;

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::from_ints(re, im)
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let a = M2::from_rows([[c(1, 2), c(3, -1)], [c(0, 5), c(-2, 0)]]);
        assert_eq!(a.mul(&M2::identity()), a);
        assert_eq!(M2::identity().mul(&a), a);
    }

    #[test]
    fn commutator_of_commuting_matrices_is_zero() {
        let a = M2::scaled_identity(&c(3, 1));
        let b = M2::from_rows([[c(1, 0), c(2, 0)], [c(2, 0), c(1, 0)]]);
        assert!(M2::commutator(&a, &b).is_zero());
    }

    #[test]
    fn cross_of_parallel_vectors_is_zero() {
        let a = [c(2, 1), c(-3, 0), c(4, 4)];
        let b = vec3_scale(&c(5, -2), &a);
        assert!(vec3_is_zero(&vec3_cross(&a, &b)));
    }

    #[test]
    fn max_magnitude_reports_largest_entry() {
        let a = M2::from_rows([[c(0, 0), c(3, -4)], [c(1, 0), c(0, 0)]]);
        assert_eq!(a.max_magnitude(), 7.0);
    }
}
