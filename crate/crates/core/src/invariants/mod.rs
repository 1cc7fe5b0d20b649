//! The linear symmetric space GL(2n)/(GL(n) x GL(n)) on explicit rational
//! matrices viewed inside a p-adic field: block projection, the invariant
//! map, strong regularity, and the sign-valued transfer factor with its
//! equivariance law.
//!
//! Only valuations and quadratic-character signs of the entries are ever
//! consumed, so all arithmetic stays in the rationals; no completion is
//! constructed. The projection realizes the quotient as
//! `gamma -> gamma . eps . gamma^{-1}` with `eps = diag(I_n, -I_n)`, which
//! reproduces the block action law
//! `(g, h) . x = (g A g^{-1}, g B h^{-1}, h C g^{-1}, h D h^{-1})`.

mod matrix;

pub use matrix::MatQ;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::{Error, Result};

/// A nonzero rational viewed inside the p-adic numbers: exposes the exact
/// valuation, the unramified quadratic character, and the normalized
/// absolute value.
#[derive(Clone, PartialEq, Debug)]
pub struct PAdicScalar {
    value: BigRational,
    p: u64,
}

impl PAdicScalar {
    pub fn new(value: BigRational, p: u64) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::Domain("p-adic scalar must be nonzero".into()));
        }
        if p < 2 {
            return Err(Error::Domain("p must be a prime >= 2".into()));
        }
        Ok(Self { value, p })
    }

    /// Exact p-adic valuation, from the factorizations of numerator and
    /// denominator.
    pub fn valuation(&self) -> i64 {
        int_valuation(self.value.numer(), self.p) - int_valuation(self.value.denom(), self.p)
    }

    /// The unramified quadratic character `(-1)^{v_p}`.
    pub fn eta(&self) -> i8 {
        if self.valuation() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `|x| = p^{-v_p(x)}`, exact.
    pub fn abs(&self) -> BigRational {
        let v = self.valuation();
        let p = BigRational::from_integer(BigInt::from(self.p));
        let mag = num_traits::pow::pow(p, v.unsigned_abs() as usize);
        if v >= 0 {
            mag.recip()
        } else {
            mag
        }
    }
}

fn int_valuation(v: &BigInt, p: u64) -> i64 {
    debug_assert!(!v.is_zero());
    let p = BigInt::from(p);
    let mut v = v.clone();
    let mut out = 0;
    loop {
        let (q, r) = v.div_rem(&p);
        if !r.is_zero() {
            return out;
        }
        v = q;
        out += 1;
    }
}

/// A character of the nonzero rationals used in transfer factors: trivial
/// or the unramified quadratic one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CharacterSign {
    Trivial,
    Quadratic,
}

impl CharacterSign {
    /// Value on a nonzero rational at the prime `p`.
    pub fn value(&self, x: &BigRational, p: u64) -> Result<i8> {
        if x.is_zero() {
            return Err(Error::Degenerate("character evaluated at zero".into()));
        }
        match self {
            CharacterSign::Trivial => Ok(1),
            CharacterSign::Quadratic => Ok(PAdicScalar::new(x.clone(), p)?.eta()),
        }
    }

    /// The pointwise product character.
    pub fn product(&self, other: &CharacterSign) -> CharacterSign {
        match (self, other) {
            (CharacterSign::Quadratic, CharacterSign::Trivial)
            | (CharacterSign::Trivial, CharacterSign::Quadratic) => CharacterSign::Quadratic,
            _ => CharacterSign::Trivial,
        }
    }
}

/// The three characters `(eta_0, eta_1, eta_2)` entering the transfer
/// factor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TransferSigns {
    pub eta0: CharacterSign,
    pub eta1: CharacterSign,
    pub eta2: CharacterSign,
}

/// A point of the symmetric space in block form, together with the prime
/// through which valuations are read.
#[derive(Clone, PartialEq, Debug)]
pub struct SymmetricSpacePoint {
    pub a: MatQ,
    pub b: MatQ,
    pub c: MatQ,
    pub d: MatQ,
    pub p: u64,
}

impl SymmetricSpacePoint {
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// The block action `(g, h) . x`.
    pub fn act(&self, g: &MatQ, h: &MatQ) -> Result<Self> {
        let gi = g.inverse()?;
        let hi = h.inverse()?;
        Ok(Self {
            a: g.mul(&self.a)?.mul(&gi)?,
            b: g.mul(&self.b)?.mul(&hi)?,
            c: h.mul(&self.c)?.mul(&gi)?,
            d: h.mul(&self.d)?.mul(&hi)?,
            p: self.p,
        })
    }
}

/// Projects an invertible `2n x 2n` matrix to the symmetric space:
/// `gamma -> gamma . eps . gamma^{-1}` with `eps = diag(I_n, -I_n)`,
/// returned in block form. Fails on singular or odd-sized input.
pub fn project_sym(gamma: &MatQ, p: u64) -> Result<SymmetricSpacePoint> {
    if !gamma.is_square() || gamma.rows() % 2 != 0 {
        return Err(Error::Domain(
            "projection needs an invertible matrix of even size".into(),
        ));
    }
    let n = gamma.rows() / 2;
    let inv = gamma
        .inverse()
        .map_err(|_| Error::Domain("singular matrix cannot be projected".into()))?;
    // gamma * eps: negate the last n columns of gamma.
    let mut ge = gamma.clone();
    for i in 0..2 * n {
        for j in n..2 * n {
            let v = -ge[(i, j)].clone();
            ge[(i, j)] = v;
        }
    }
    let x = ge.mul(&inv)?;
    Ok(SymmetricSpacePoint {
        a: x.block(0, 0, n, n),
        b: x.block(0, n, n, n),
        c: x.block(n, 0, n, n),
        d: x.block(n, n, n, n),
        p,
    })
}

/// Coefficients of the monic characteristic polynomial of the upper-left
/// block, listed from the `t^{n-1}` coefficient down to the constant term.
/// This is the invariant of the two-sided orbit.
pub fn car_lin(x: &SymmetricSpacePoint) -> Result<Vec<BigRational>> {
    let cp = x.a.charpoly()?;
    let n = x.n() as i64;
    Ok((0..n).rev().map(|e| cp.coeff(e)).collect())
}

/// The Krylov-style span matrix with rows `w, wD, ..., wD^{n-1}`.
fn span_matrix(x: &SymmetricSpacePoint, w: &MatQ) -> Result<MatQ> {
    let n = x.n();
    if w.rows() != 1 || w.cols() != n {
        return Err(Error::Domain(format!("w must be a 1x{n} row vector")));
    }
    let mut rows: Vec<BigRational> = Vec::with_capacity(n * n);
    let mut current = w.clone();
    for _ in 0..n {
        for j in 0..n {
            rows.push(current[(0, j)].clone());
        }
        current = current.mul(&x.d)?;
    }
    MatQ::new(n, n, rows)
}

/// Strong regularity of the pair `(x, w)`: the characteristic polynomial
/// of the `A` block is squarefree, the iterates `w, wD, ..., wD^{n-1}`
/// span the full row space, and the determinants consumed by the transfer
/// factor (`det BC` and `det C`) are nonzero. The last condition is the
/// regularity convention that makes the factor well-defined; it is what
/// rules out the base point `eps` at `n = 1`.
pub fn is_strongly_regular(x: &SymmetricSpacePoint, w: &MatQ) -> Result<bool> {
    let n = x.n();
    let span = span_matrix(x, w)?;
    if span.rank() != n {
        return Ok(false);
    }
    if !x.a.charpoly()?.is_squarefree() {
        return Ok(false);
    }
    let bc = x.b.mul(&x.c)?;
    Ok(!bc.det()?.is_zero() && !x.c.det()?.is_zero())
}

/// The transfer factor
/// `Omega(gamma, w) = eta_2^n(det BC) (eta_1 eta_2)(det C)
///  eta_0(det(w|wD|...|wD^{n-1})) eta_2(det gamma)`,
/// a sign. Characters on matrix blocks are read through the determinant.
/// Vanishing determinants mean the pair was not strongly regular and are a
/// degenerate-input error.
pub fn transfer_factor(
    gamma: &MatQ,
    w: &MatQ,
    signs: &TransferSigns,
    p: u64,
) -> Result<i8> {
    let x = project_sym(gamma, p)?;
    let n = x.n();
    let det_bc = x.b.mul(&x.c)?.det()?;
    let det_c = x.c.det()?;
    let det_span = span_matrix(&x, w)?.det()?;
    let det_gamma = gamma.det()?;
    for (name, v) in [
        ("det(BC)", &det_bc),
        ("det(C)", &det_c),
        ("det(w|wD|...)", &det_span),
        ("det(gamma)", &det_gamma),
    ] {
        if v.is_zero() {
            return Err(Error::Degenerate(format!(
                "{name} vanishes: the pair is not strongly regular"
            )));
        }
    }
    let mut sign = 1i8;
    if n % 2 == 1 {
        sign *= signs.eta2.value(&det_bc, p)?;
    }
    sign *= signs.eta1.product(&signs.eta2).value(&det_c, p)?;
    sign *= signs.eta0.value(&det_span, p)?;
    sign *= signs.eta2.value(&det_gamma, p)?;
    Ok(sign)
}

/// A block-diagonal element of GL(n) x GL(n).
#[derive(Clone, Debug)]
pub struct BlockPair {
    pub first: MatQ,
    pub second: MatQ,
}

impl BlockPair {
    pub fn identity(n: usize) -> Self {
        Self {
            first: MatQ::identity(n),
            second: MatQ::identity(n),
        }
    }

    fn embed(&self) -> MatQ {
        MatQ::block_diag(&self.first, &self.second)
    }

    /// Character value via the convention
    /// `chi(h) = chi(det h^(1) / det h^(2))`.
    fn character(&self, sign: &CharacterSign, p: u64) -> Result<i8> {
        let ratio = self.first.det()? / self.second.det()?;
        sign.value(&ratio, p)
    }
}

/// Checks the transformation law of the transfer factor under the
/// two-sided action `gamma -> h1^{-1} gamma h2`, `w -> w h1^(2)`:
///
/// `Omega(h . (gamma, w)) eta_0(det h1^(2)) eta_1(h1) eta_2(h2)
///   = Omega(gamma, w)`,
///
/// where `eta_i(h) = eta_i(det h^(1) / det h^(2))`. The pair must stay
/// strongly regular after the action.
pub fn check_equivariance(
    gamma: &MatQ,
    w: &MatQ,
    h1: &BlockPair,
    h2: &BlockPair,
    signs: &TransferSigns,
    p: u64,
) -> Result<bool> {
    let original = transfer_factor(gamma, w, signs, p)?;
    let moved_gamma = h1.embed().inverse()?.mul(gamma)?.mul(&h2.embed())?;
    let moved_w = w.mul(&h1.second)?;
    let moved = transfer_factor(&moved_gamma, &moved_w, signs, p)?;
    let cocycle = signs.eta0.value(&h1.second.det()?, p)?
        * h1.character(&signs.eta1, p)?
        * h2.character(&signs.eta2, p)?;
    Ok(moved * cocycle == original)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn gamma_example() -> MatQ {
        MatQ::from_i64(2, 2, &[1, 1, 1, 2]).unwrap()
    }

    fn quadratic_signs() -> TransferSigns {
        TransferSigns {
            eta0: CharacterSign::Quadratic,
            eta1: CharacterSign::Trivial,
            eta2: CharacterSign::Quadratic,
        }
    }

    #[test]
    fn padic_scalar_valuations() {
        let x = PAdicScalar::new(BigRational::new(BigInt::from(-8), BigInt::from(3)), 2).unwrap();
        assert_eq!(x.valuation(), 3);
        assert_eq!(x.eta(), -1);
        assert_eq!(x.abs(), BigRational::new(BigInt::from(1), BigInt::from(8)));
        let y = PAdicScalar::new(BigRational::new(BigInt::from(4), BigInt::from(9)), 3).unwrap();
        assert_eq!(y.valuation(), -2);
        assert_eq!(y.eta(), 1);
        assert_eq!(y.abs(), rat(9));
    }

    #[test]
    fn project_identity_gives_epsilon() {
        let x = project_sym(&MatQ::identity(2), 3).unwrap();
        assert_eq!(x.a, MatQ::identity(1));
        assert!(x.b[(0, 0)].is_zero());
        assert!(x.c[(0, 0)].is_zero());
        assert_eq!(x.d[(0, 0)], rat(-1));
    }

    #[test]
    fn project_example_blocks() {
        // gamma = [[1,1],[1,2]] maps to blocks (3, -2, 4, -3).
        let x = project_sym(&gamma_example(), 3).unwrap();
        assert_eq!(x.a[(0, 0)], rat(3));
        assert_eq!(x.b[(0, 0)], rat(-2));
        assert_eq!(x.c[(0, 0)], rat(4));
        assert_eq!(x.d[(0, 0)], rat(-3));
    }

    #[test]
    fn project_intertwines_the_action() {
        let gamma = MatQ::from_i64(4, 4, &[
            1, 1, 0, 2,
            0, 1, 1, 0,
            2, 0, 1, 1,
            0, 1, 0, 2,
        ])
        .unwrap();
        let g = MatQ::from_i64(2, 2, &[1, 2, 0, 1]).unwrap();
        let h = MatQ::from_i64(2, 2, &[3, 1, 1, 1]).unwrap();
        let left = project_sym(
            &MatQ::block_diag(&g, &h).mul(&gamma).unwrap(),
            5,
        )
        .unwrap();
        let right = project_sym(&gamma, 5).unwrap().act(&g, &h).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn car_lin_examples() {
        // x = eps at n = 2: charpoly (t-1)^2 = t^2 - 2t + 1.
        let x = project_sym(&MatQ::identity(4), 3).unwrap();
        assert_eq!(car_lin(&x).unwrap(), vec![rat(-2), rat(1)]);
        // The 2x2 example: A = 3, charpoly t - 3.
        let x = project_sym(&gamma_example(), 3).unwrap();
        assert_eq!(car_lin(&x).unwrap(), vec![rat(-3)]);
    }

    #[test]
    fn car_lin_is_orbit_invariant() {
        let gamma = MatQ::from_i64(4, 4, &[
            1, 1, 0, 2,
            0, 1, 1, 0,
            2, 0, 1, 1,
            0, 1, 0, 2,
        ])
        .unwrap();
        let x = project_sym(&gamma, 3).unwrap();
        let g = MatQ::from_i64(2, 2, &[2, 1, 1, 1]).unwrap();
        let h = MatQ::from_i64(2, 2, &[1, 3, 0, 1]).unwrap();
        let moved = x.act(&g, &h).unwrap();
        assert_eq!(car_lin(&x).unwrap(), car_lin(&moved).unwrap());
    }

    #[test]
    fn strong_regularity_examples() {
        let w1 = MatQ::from_i64(1, 1, &[1]).unwrap();
        // The base point fails the convention at n = 1 (B = C = 0).
        let eps = project_sym(&MatQ::identity(2), 3).unwrap();
        assert!(!is_strongly_regular(&eps, &w1).unwrap());
        // The worked 2x2 example is strongly regular.
        let x = project_sym(&gamma_example(), 3).unwrap();
        assert!(is_strongly_regular(&x, &w1).unwrap());
        // Zero w breaks the span condition.
        let w0 = MatQ::from_i64(1, 1, &[0]).unwrap();
        assert!(!is_strongly_regular(&x, &w0).unwrap());
    }

    #[test]
    fn transfer_factor_examples() {
        let w = MatQ::from_i64(1, 1, &[1]).unwrap();
        // At p = 3 every valuation involved is even.
        assert_eq!(
            transfer_factor(&gamma_example(), &w, &quadratic_signs(), 3).unwrap(),
            1
        );
        // At p = 2 the factor eta(BC) = eta(-8) flips the sign.
        assert_eq!(
            transfer_factor(&gamma_example(), &w, &quadratic_signs(), 2).unwrap(),
            -1
        );
        // All-trivial characters give +1.
        let trivial = TransferSigns {
            eta0: CharacterSign::Trivial,
            eta1: CharacterSign::Trivial,
            eta2: CharacterSign::Trivial,
        };
        assert_eq!(
            transfer_factor(&gamma_example(), &w, &trivial, 2).unwrap(),
            1
        );
        // Degenerate pair: the base point.
        assert!(transfer_factor(&MatQ::identity(2), &w, &quadratic_signs(), 3).is_err());
    }

    #[test]
    fn equivariance_examples() {
        let w = MatQ::from_i64(1, 1, &[1]).unwrap();
        let id = BlockPair::identity(1);
        assert!(check_equivariance(
            &gamma_example(),
            &w,
            &id,
            &id,
            &quadratic_signs(),
            3
        )
        .unwrap());
        // Scaling one block by 3 at p = 3 flips both sides consistently.
        let h1 = BlockPair {
            first: MatQ::from_i64(1, 1, &[3]).unwrap(),
            second: MatQ::from_i64(1, 1, &[1]).unwrap(),
        };
        assert!(check_equivariance(
            &gamma_example(),
            &w,
            &h1,
            &id,
            &quadratic_signs(),
            3
        )
        .unwrap());
    }
}
