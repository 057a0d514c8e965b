//! Dense univariate polynomials over an exact field, and exact root
//! finding in ℚ(i) seeded by floating-point approximations.

use std::fmt;

use num_complex::Complex64;

use crate::linalg::{Field, Gaussian, Matrix, Q};

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `x − r`.
    pub fn linear(r: &F) -> Self {
        Self::new(vec![r.negated(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc.times(x).plus(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        let z = F::zero();
        Self::new((0..len).map(|i| self.coeffs.get(i).unwrap_or(&z).plus(o.coeffs.get(i).unwrap_or(&z))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().negated()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.times(c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder. Panics when dividing by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().unwrap().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![F::zero(); self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].times(&inv);
            if !c.is_zero() {
                for (i, b) in d.coeffs.iter().enumerate() {
                    r[top - dd + i].sub_mul_assign(&c, b);
                }
            }
            q[top - dd] = c;
            r.pop();
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor; the zero polynomial only for two zeros.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.times(&F::from_i64(i as i64))).collect())
    }

    /// The product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Renders with the given variable name, highest degree first.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = c.to_string();
            let cs = if cs.contains(['+', ' ']) || (cs.contains('-') && cs.len() > 1 && !cs.starts_with('-')) {
                format!("({cs})")
            } else {
                cs
            };
            parts.push(match (mono.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("x"))
    }
}

/// `det(x·I − m)` by the Faddeev–LeVerrier recursion.
pub fn charpoly<F: Field>(m: &Matrix<F>) -> Poly<F> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut coeffs = vec![F::zero(); n + 1];
    coeffs[n] = F::one();
    let mut mk = Matrix::<F>::zeros(n, n);
    let id = Matrix::<F>::identity(n);
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I, c_{n−k} = −tr(A·M_k)/k
        let prev = m.mul(&mk);
        let c = &coeffs[n - k + 1];
        mk = Matrix::from_fn(n, n, |r, s| prev.get(r, s).plus(&id.get(r, s).times(c)));
        let am = m.mul(&mk);
        let tr = (0..n).fold(F::zero(), |acc, i| acc.plus(am.get(i, i)));
        coeffs[n - k] = tr.negated().over(&F::from_i64(k as i64));
    }
    Poly::new(coeffs)
}

/// Durand–Kerner approximations of all complex roots.
pub fn approximate_roots<F: Field>(p: &Poly<F>) -> Vec<Complex64> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    let lead = p.lead().unwrap().approx();
    let c: Vec<Complex64> = p.coeffs().iter().map(|x| x.approx() / lead).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let radius = 1.0 + c[..d].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * radius / 2.0).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    z
}

/// Roots of `p` lying in ℚ(i), found from numeric candidates by
/// continued-fraction rounding and kept only after exact evaluation.
/// Sorted by descending real part, then descending imaginary part.
pub fn gaussian_roots(p: &Poly<Gaussian>) -> Vec<Gaussian> {
    let sf = p.squarefree();
    let mut out: Vec<Gaussian> = Vec::new();
    for z in approximate_roots(&sf) {
        for max_den in [1, 10, 100, 1_000, 10_000, 100_000] {
            let (Some(re), Some(im)) = (round(z.re, max_den), round(z.im, max_den)) else {
                continue;
            };
            let cand = Gaussian::new(re, im);
            if (cand.approx() - z).norm() <= 1e-6 * (1.0 + z.norm()) && sf.eval(&cand).is_zero() {
                if !out.contains(&cand) {
                    out.push(cand);
                }
                break;
            }
        }
    }
    out.sort_by(|a, b| (b.re.clone(), b.im.clone()).cmp(&(a.re.clone(), a.im.clone())));
    out
}

fn round(x: f64, max_den: i64) -> Option<Q> {
    if x.abs() < 1e-9 {
        return Some(Q::from(0));
    }
    Q::approximate(x, max_den)
}

/// Rational roots of a rational polynomial.
pub fn rational_roots(p: &Poly<Q>) -> Vec<Q> {
    gaussian_roots(&p.map(|c| Gaussian::from(c.clone()))).into_iter().filter(Gaussian::is_real).map(|g| g.re).collect()
}
