use std::fmt;
use std::ops::Mul;

use super::PermError;

/// Largest supported degree.
pub const MAX_DEGREE: usize = 32;

/// Sign of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// A bijection of the points `0..degree`.
///
/// Permutations act on the right: `p * q` first applies `p`, then `q`, so the
/// product `r1 * r2 * r3` of three generators reads the same way it is written
/// in word notation. Images are stored inline, which keeps the type `Copy` and
/// cheap to compose in the inner loops of group enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    degree: u8,
    // entries at index >= degree are fixed points, so derived Eq/Hash/Ord only
    // depend on the meaningful prefix
    images: [u8; MAX_DEGREE],
}

const IDENTITY_IMAGES: [u8; MAX_DEGREE] = {
    let mut a = [0u8; MAX_DEGREE];
    let mut i = 0;
    while i < MAX_DEGREE {
        a[i] = i as u8;
        i += 1;
    }
    a
};

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        Permutation {
            degree: degree as u8,
            images: IDENTITY_IMAGES,
        }
    }

    /// Builds a permutation from its image list (`images[p]` is the image of `p`).
    pub fn from_images(images: &[usize]) -> Result<Permutation, PermError> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut seen = [false; MAX_DEGREE];
        let mut out = IDENTITY_IMAGES;
        for (p, &q) in images.iter().enumerate() {
            if q >= n || seen[q] {
                return Err(PermError::NotABijection);
            }
            seen[q] = true;
            out[p] = q as u8;
        }
        Ok(Permutation {
            degree: n as u8,
            images: out,
        })
    }

    /// Product of disjoint cycles given as 0-based point lists.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Permutation, PermError> {
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        let mut out = Permutation::identity(degree);
        let mut used = [false; MAX_DEGREE];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if used[p] {
                    return Err(PermError::NotABijection);
                }
                used[p] = true;
                out.images[p] = cycle[(k + 1) % cycle.len()] as u8;
            }
        }
        Ok(out)
    }

    /// The transposition swapping `a` and `b` (0-based).
    pub fn transposition(degree: usize, a: usize, b: usize) -> Permutation {
        assert!(a < degree && b < degree);
        let mut out = Permutation::identity(degree);
        out.images.swap(a, b);
        out
    }

    /// The cycle `(0, 1, ..., degree-1)`.
    pub fn long_cycle(degree: usize) -> Permutation {
        let mut out = Permutation::identity(degree);
        for p in 0..degree {
            out.images[p] = ((p + 1) % degree) as u8;
        }
        out
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Image of point `p`.
    #[inline]
    pub fn image(&self, p: usize) -> usize {
        self.images[p] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images[..self.degree as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images == IDENTITY_IMAGES
    }

    /// Left-to-right product: the result maps `x` to `other(self(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    #[inline]
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        let mut images = IDENTITY_IMAGES;
        let d = self.degree as usize;
        for (img, &x) in images[..d].iter_mut().zip(&self.images[..d]) {
            *img = other.images[x as usize];
        }
        Permutation {
            degree: self.degree,
            images,
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = IDENTITY_IMAGES;
        for p in 0..self.degree as usize {
            images[self.images[p] as usize] = p as u8;
        }
        Permutation {
            degree: self.degree,
            images,
        }
    }

    /// `self` raised to an integer power; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Permutation {
        let mut base = if exp < 0 { self.inverse() } else { *self };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `other⁻¹ · self · other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Permutation {
        other.inverse().then(self).then(other)
    }

    /// Disjoint cycles of length at least two, each starting at its least
    /// point, ordered by least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Number of cycles counting fixed points.
    pub fn cycle_count(&self) -> usize {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        self.cycles().len() + (self.degree() - moved)
    }

    /// Lengths of the nontrivial cycles, sorted ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn parity(&self) -> Parity {
        if (self.degree() - self.cycle_count()).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// Least `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// An element of order exactly two.
    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.then(self).is_identity()
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&p| self.image(p) != p).collect()
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        (0..self.degree()).find(|&p| self.image(p) != p)
    }

    /// Number of disjoint transpositions when `self` is an involution.
    pub fn transposition_count(&self) -> usize {
        self.support().len() / 2
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.then(other) == other.then(self)
    }

    /// The same permutation on `degree` points, fixing every added point.
    pub fn extend_to(&self, degree: usize) -> Result<Permutation, PermError> {
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        if degree < self.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: degree,
            });
        }
        Ok(Permutation {
            degree: degree as u8,
            images: self.images,
        })
    }

    /// Disjoint union: `self` on the first `self.degree()` points, `other` shifted after them.
    pub fn direct_sum(&self, other: &Permutation) -> Result<Permutation, PermError> {
        let n = self.degree() + other.degree();
        if n > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut out = Permutation::identity(n);
        out.images[..self.degree()].copy_from_slice(self.images());
        let shift = self.degree() as u8;
        for (p, &q) in other.images().iter().enumerate() {
            out.images[self.degree() + p] = q + shift;
        }
        Ok(out)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Mul for Permutation {
    type Output = Permutation;

    /// Panics on a degree mismatch; use [`Permutation::compose`] for a checked product.
    fn mul(self, rhs: Permutation) -> Permutation {
        assert_eq!(
            self.degree, rhs.degree,
            "degree mismatch in permutation product"
        );
        self.then(&rhs)
    }
}

impl<'a> Mul<&'a Permutation> for &'a Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &'a Permutation) -> Permutation {
        assert_eq!(
            self.degree, rhs.degree,
            "degree mismatch in permutation product"
        );
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[deg {}]", self, self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        crate::perm::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let q = p("(1,3,2)(4,5)", 5);
        let e = Permutation::identity(5);
        assert_eq!(e * q, q);
        assert_eq!(q * e, q);
    }

    #[test]
    fn involution_squared() {
        let t = p("(1,2)", 2);
        assert!((t * t).is_identity());
    }

    #[test]
    fn product_is_left_to_right() {
        // 1 -> 2 under (1,2), then 2 -> 3 under (2,3)
        let prod = p("(1,2)", 3) * p("(2,3)", 3);
        assert_eq!(prod.image(0), 2);
        assert_eq!(prod.to_string(), "(1,3,2)");
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let err = p("(1,2)", 2).compose(&p("(1,2)", 3)).unwrap_err();
        assert!(matches!(
            err,
            PermError::DegreeMismatch { left: 2, right: 3 }
        ));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Permutation::identity(4).parity(), Parity::Even);
        assert_eq!(p("(1,2)", 2).parity(), Parity::Odd);
        assert_eq!(p("(1,2)(3,5,8,10,7,6,4)(9,11)", 11).parity(), Parity::Even);
    }

    #[test]
    fn parity_by_transposition_product() {
        // (1,2)(3,5,8,10,7,6,4)(9,11) as an explicit product of transpositions:
        // a k-cycle (a1,...,ak) = (a1,a2)(a1,a3)...(a1,ak) under right action
        let mut acc = Permutation::identity(11);
        let mut count = 0;
        for cyc in [vec![1, 2], vec![3, 5, 8, 10, 7, 6, 4], vec![9, 11]] {
            for &b in &cyc[1..] {
                acc = acc * Permutation::transposition(11, cyc[0] - 1, b - 1);
                count += 1;
            }
        }
        assert_eq!(acc, p("(1,2)(3,5,8,10,7,6,4)(9,11)", 11));
        assert_eq!(count, 8);
        assert!(acc.is_even());
    }

    #[test]
    fn order_examples() {
        assert_eq!(Permutation::identity(3).order(), 1);
        assert_eq!(p("(1,2)(3,4)", 4).order(), 2);
        let q = p("(1,2,5,3)(4,7,6)(8,9,11,10)", 11);
        assert_eq!(q.order(), 12);
        // repeated composition
        let mut acc = q;
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc * q;
            k += 1;
        }
        assert_eq!(k, 12);
    }

    #[test]
    fn pow_and_inverse() {
        let q = p("(1,2,3,4,5)", 5);
        assert_eq!(q.pow(-1), q.inverse());
        assert_eq!(q.pow(5), Permutation::identity(5));
        assert_eq!(q.pow(7), q.pow(2));
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(&[0, 0, 1]).is_err());
        assert!(Permutation::from_images(&[0, 3, 1]).is_err());
        assert!(Permutation::from_images(&[2, 0, 1]).is_ok());
    }

    #[test]
    fn direct_sum_shifts_points() {
        let s = p("(1,2)", 2).direct_sum(&p("(1,2)(3,4)", 4)).unwrap();
        assert_eq!(s.to_string(), "(1,2)(3,4)(5,6)");
    }
}
