use crate::error::Result;
use crate::numerics::{Poly, Real};
use crate::submonotone::{coefficients, x_of, y_of};

/// Quadratic in beta whose double root gives the equalizing expansion factor.
///
/// Each coefficient has the form `q_j = a_j(R) + x^t b_j(R)` with `a_j`, `b_j` polynomials
/// in `R` for fixed `p`; see [`Basis`].
#[derive(Clone, Debug, PartialEq)]
pub struct CharPoly<T> {
    pub q0: T,
    pub q1: T,
    pub q2: T,
    pub x: T,
    p: T,
    r: T,
}

impl<T: Real> CharPoly<T> {
    pub fn poly(&self) -> Poly<T> {
        Poly::new(vec![self.q0.clone(), self.q1.clone(), self.q2.clone()])
    }

    pub fn discriminant(&self) -> T {
        self.q1.clone() * self.q1.clone() - self.q0.clone() * self.q2.clone() * 4.0
    }

    /// Vertex `-q1 / (2 q2)`, the double root when the discriminant vanishes.
    pub fn vertex(&self) -> T {
        -self.q1.clone() / (self.q2.clone() * 2.0)
    }

    /// `y(p, beta, R)`; needs beta, so it is evaluated on demand.
    pub fn y(&self, beta: &T) -> Result<T> {
        let k = coefficients(&self.p, beta)?;
        Ok(y_of(&k, &self.p, &self.r))
    }
}

/// The five R-polynomials behind `q0, q1, q2` (`a_0` is identically zero).
struct Basis<T> {
    a1: Poly<T>,
    a2: Poly<T>,
    b0: Poly<T>,
    b1: Poly<T>,
    b2: Poly<T>,
}

fn c<T: Real>(v: T) -> Poly<T> {
    Poly::new(vec![v])
}

/// `u + v R`
fn lin<T: Real>(u: T, v: T) -> Poly<T> {
    Poly::new(vec![u, v])
}

impl<T: Real> Basis<T> {
    fn new(p: &T) -> Self {
        let p = p.clone();
        let pm2 = p.clone() - 2.0;
        let pm1 = p.clone() - 1.0;
        let p2 = p.powi(2);
        let p3 = p.powi(3);
        let p4 = p.powi(4);
        let pm2_4 = pm2.powi(4);

        // a1 = 2 (p-2)^4 (p-1) p^3 (R - p)
        let k = pm2_4.clone() * pm1.clone() * p3.clone() * 2.0;
        let a1 = lin(-(k.clone() * p.clone()), k);

        // a2 = (p-1) 2 (p-2)^4 p^3 (3p - R)
        let k = pm1.clone() * pm2_4 * p3 * 2.0;
        let a2 = lin(k.clone() * p.clone() * 3.0, -k);

        // b0 = -(p^2 (2p((p-6)p+12) - 17) - (p-2) R) (p^2 + (p-2) R)
        let u0 = p2.clone() * (p.clone() * ((p.clone() - 6.0) * p.clone() + 12.0) * 2.0 - 17.0);
        let b0 = lin(u0, -pm2.clone())
            .mul(&lin(p2.clone(), pm2.clone()))
            .scale(&-T::one());

        // b1 = k0 p^4 - 2 (p-2) k1 p^2 R - (p-2)^2 ((p-2)p + 2) R^2
        let k0 = p.clone()
            * (p.clone()
                * (p.clone() * (p.clone() * (p.clone() * 2.0 - 19.0) + 74.0) * 2.0 - 297.0)
                + 308.0)
            - 134.0;
        let k1 = p.clone() * (p.clone() * ((p.clone() - 8.0) * p.clone() + 25.0) - 35.0) + 20.0;
        let b1 = Poly::new(vec![
            k0 * p4,
            -(pm2.clone() * k1 * p2.clone() * 2.0),
            -(pm2.powi(2) * (pm2.clone() * p.clone() + 2.0)),
        ]);

        // b2 = -(p-1)^2 (p^2 (2p-5) - (p-2) R) ((2(p-4)p+9) p^2 + (p-2) R)
        let first = lin(p2.clone() * (p.clone() * 2.0 - 5.0), -pm2.clone());
        let second = lin(
            ((p.clone() - 4.0) * p.clone() * 2.0 + 9.0) * p2,
            pm2,
        );
        let b2 = first.mul(&second).mul(&c(-(pm1.powi(2))));

        Basis { a1, a2, b0, b1, b2 }
    }
}

/// The characteristic polynomial of `(p, R)` for `t`-hops.
pub fn char_poly<T: Real>(p: &T, r: &T, t: usize) -> CharPoly<T> {
    let basis = Basis::new(p);
    let x = x_of(p, r);
    let xt = x.powi(t as i32);
    CharPoly {
        q0: xt.clone() * basis.b0.eval(r),
        q1: basis.a1.eval(r) + xt.clone() * basis.b1.eval(r),
        q2: basis.a2.eval(r) + xt * basis.b2.eval(r),
        x,
        p: p.clone(),
        r: r.clone(),
    }
}

/// `(qbar0, qbar1, qbar2)` as polynomials in `R`: the `x^t` parts of the coefficients.
pub fn limit_coefficients<T: Real>(p: &T) -> [Poly<T>; 3] {
    let basis = Basis::new(p);
    [basis.b0, basis.b1, basis.b2]
}

/// `qbar1^2 - 4 qbar0 qbar2`, a quartic in `R`.
pub fn limit_quartic<T: Real>(p: &T) -> Poly<T> {
    let [b0, b1, b2] = limit_coefficients(p);
    b1.mul(&b1).add(&b0.mul(&b2).scale(&T::from_f64(-4.0)))
}
