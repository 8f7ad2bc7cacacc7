//! Affine matrices of rational point tuples, exact determinants, covolume
//! of the image of the S-integer lattice, and the volume-contradiction
//! certificate showing that d+1 independent bounded-height rationals cannot
//! all sit inside a ball of the scheduled radius.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::exactnum::{as_power_of, rat_pow};
use crate::places::{content, place_abs, pow2, Mode, Place, PlaceSet};
use crate::{Error, Int, Rational, Result};

/// Rational point q/q0 carried with its integer data, so height hypotheses
/// apply to the representation actually supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximant {
    pub q: Vec<Int>,
    pub q0: Int,
}

impl Approximant {
    pub fn new(q: Vec<Int>, q0: Int) -> Self {
        Approximant { q, q0 }
    }

    pub fn from_i64(q: &[i64], q0: i64) -> Self {
        Approximant {
            q: q.iter().map(|&x| Int::from(x)).collect(),
            q0: Int::from(q0),
        }
    }

    pub fn d(&self) -> usize {
        self.q.len()
    }

    /// max(|q_1|, ..., |q_d|, |q0|)
    pub fn height(&self) -> Int {
        self.q
            .iter()
            .map(|x| x.abs())
            .chain(std::iter::once(self.q0.abs()))
            .max()
            .expect("nonempty by construction")
    }

    /// The rational point (q_1/q0, ..., q_d/q0).
    pub fn point(&self) -> Result<Vec<Rational>> {
        if self.q0.is_zero() {
            return Err(Error::Domain("approximant with zero denominator".into()));
        }
        Ok(self
            .q
            .iter()
            .map(|qi| Rational::new(qi.clone(), self.q0.clone()))
            .collect())
    }
}

/// Dyadic height window at level n. The enumeration window is the closed
/// interval [2^n, 2^{n+1}]; the determinant lemmas assume the open-sided
/// variants checked by `lemma_hypothesis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeightWindow {
    pub n: u32,
    pub mode: Mode,
}

impl HeightWindow {
    pub fn new(n: u32, mode: Mode) -> Self {
        HeightWindow { n, mode }
    }

    pub fn for_set(n: u32, s: &PlaceSet) -> Self {
        HeightWindow { n, mode: s.mode() }
    }

    pub fn lo(&self) -> Int {
        Int::one() << self.n
    }

    pub fn hi(&self) -> Int {
        Int::one() << (self.n + 1)
    }

    fn gauge(&self, a: &Approximant) -> Int {
        match self.mode {
            Mode::AllFinite => a.height(),
            Mode::WithInfinity => a.q0.abs(),
        }
    }

    /// Closed window membership: gauge in [2^n, 2^{n+1}].
    pub fn contains_closed(&self, a: &Approximant) -> bool {
        let h = self.gauge(a);
        self.lo() <= h && h <= self.hi()
    }

    /// The determinant-lemma hypothesis: 0 < height < 2^{n+1} over
    /// all-finite S, 2^n < |q0| < 2^{n+1} when S has the real place.
    pub fn lemma_hypothesis(&self, a: &Approximant) -> bool {
        let h = self.gauge(a);
        match self.mode {
            Mode::AllFinite => h > Int::zero() && h < self.hi(),
            Mode::WithInfinity => h > self.lo() && h < self.hi(),
        }
    }
}

/// The (d+1)x(d+1) matrix with rows (1, r_i) for d+1 points r_i in Q^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMatrix {
    entries: Vec<Vec<Rational>>,
    points: Vec<Vec<Rational>>,
}

impl AffineMatrix {
    pub fn d(&self) -> usize {
        self.points.len() - 1
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }
}

fn check_dims(points: &[Vec<Rational>]) -> Result<usize> {
    let first = points.first().ok_or(Error::EmptyVector)?;
    let d = first.len();
    if d == 0 {
        return Err(Error::EmptyVector);
    }
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
    }
    Ok(d)
}

/// Assemble the affine matrix of d+1 points of dimension d.
pub fn build_a(points: &[Vec<Rational>]) -> Result<AffineMatrix> {
    let d = check_dims(points)?;
    if points.len() != d + 1 {
        return Err(Error::WrongArity {
            expected: d + 1,
            got: points.len(),
        });
    }
    let entries = points
        .iter()
        .map(|p| {
            let mut row = Vec::with_capacity(d + 1);
            row.push(Rational::one());
            row.extend(p.iter().cloned());
            row
        })
        .collect();
    Ok(AffineMatrix {
        entries,
        points: points.to_vec(),
    })
}

fn bareiss_det(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev; // division is exact in the Bareiss scheme
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact determinant via fraction-free elimination after clearing each
/// row's denominators.
pub fn det_exact(a: &AffineMatrix) -> Rational {
    let mut scale = Int::one();
    let int_rows: Vec<Vec<Int>> = a
        .entries
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
            let cleared = row
                .iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect();
            scale *= &lcm;
            cleared
        })
        .collect();
    Rational::new(bareiss_det(int_rows), scale)
}

/// d+1 points of dimension d span Q^d affinely iff the affine matrix is
/// nonsingular, iff the image of the S-integer lattice is a lattice.
pub fn affine_independent(points: &[Vec<Rational>]) -> Result<bool> {
    let d = check_dims(points)?;
    if points.len() != d + 1 {
        return Err(Error::WrongArity {
            expected: d + 1,
            got: points.len(),
        });
    }
    Ok(!det_exact(&build_a(points)?).is_zero())
}

/// Covolume of the image of the S-integer lattice under the affine matrix:
/// the content of det A over S with the real place appended when absent.
pub fn covolume(a: &AffineMatrix, s: &PlaceSet) -> Result<Rational> {
    let det = det_exact(a);
    if det.is_zero() {
        return Err(Error::NotALattice);
    }
    content(&det, &s.with_infinity())
}

#[derive(Clone, Debug)]
pub struct DetBoundVerdict {
    pub n: u32,
    pub mode: Mode,
    pub d: usize,
    pub det: Rational,
    /// content of det A over S: the finite-place content over all-finite S,
    /// the full covolume when S has the real place
    pub quantity: Rational,
    /// 2^{-(d+1)(n+1)}
    pub bound: Rational,
    pub exceeds_bound: bool,
    /// per point, whether its height also fits the closed window
    pub closed_window: Vec<bool>,
}

/// Exact check that the content of det A over S strictly exceeds
/// 2^{-(d+1)(n+1)} for points meeting the open height hypothesis.
pub fn check_det_lower_bound(
    points: &[Approximant],
    window: &HeightWindow,
    s: &PlaceSet,
) -> Result<DetBoundVerdict> {
    if window.mode != s.mode() {
        return Err(Error::Domain(format!(
            "window mode {} does not match the place set ({})",
            window.mode,
            s.mode()
        )));
    }
    let rational: Vec<Vec<Rational>> = points
        .iter()
        .map(|a| a.point())
        .collect::<Result<_>>()?;
    let d = check_dims(&rational)?;
    if points.len() != d + 1 {
        return Err(Error::WrongArity {
            expected: d + 1,
            got: points.len(),
        });
    }
    for (i, a) in points.iter().enumerate() {
        if !window.lemma_hypothesis(a) {
            return Err(Error::HypothesisFailure(format!(
                "point {i} has height gauge {} outside the open window at n={}",
                window.gauge(a),
                window.n
            )));
        }
    }
    let det = det_exact(&build_a(&rational)?);
    if det.is_zero() {
        return Err(Error::NotALattice);
    }
    let quantity = content(&det, s)?;
    let bound = pow2(-((d as i64 + 1) * (window.n as i64 + 1)));
    Ok(DetBoundVerdict {
        n: window.n,
        mode: window.mode,
        d,
        exceeds_bound: quantity > bound,
        det,
        quantity,
        bound,
        closed_window: points.iter().map(|a| window.contains_closed(a)).collect(),
    })
}

/// Enlargement factor applied to the real ball in with-infinity mode.
pub const REAL_ENLARGEMENT: u32 = 6;

/// Exact volume comparison certifying that the simplex-lemma hypotheses
/// are impossible: the covolume lower bound for any admissible point tuple
/// strictly exceeds the volume of the region a fundamental domain would
/// have to fit inside.
#[derive(Clone, Debug)]
pub struct ContradictionCertificate {
    pub d: usize,
    pub n: u32,
    pub mode: Mode,
    pub places: PlaceSet,
    /// snapped per-place radii the box volume was computed from
    pub radii: Vec<(Place, Rational)>,
    /// 2^{-(d+1)(n+1)}
    pub covolume_lower_bound: Rational,
    /// all-finite: product over places of radius^d (the real determinant
    /// factor appears on both sides and cancels); with-infinity: product of
    /// finite radius^d times (2 * 6 * real radius)^d
    pub box_volume: Rational,
    /// lower bound > box volume; false would mean an implementation bug
    pub impossible: bool,
}

impl ContradictionCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "n": self.n,
            "mode": self.mode.to_string(),
            "places": self.places.to_string(),
            "radii": self.radii.iter()
                .map(|(pl, r)| json!([pl.to_string(), r.to_string()]))
                .collect::<Vec<_>>(),
            "covolume_lower_bound": self.covolume_lower_bound.to_string(),
            "box_volume": self.box_volume.to_string(),
            "impossible": self.impossible,
        })
    }
}

fn validate_radii(s: &PlaceSet, radii: &[(Place, Rational)]) -> Result<()> {
    if radii.len() != s.len() || !radii.iter().map(|(pl, _)| *pl).eq(s.iter()) {
        return Err(Error::Domain(
            "radii must list exactly the places of S in set order".into(),
        ));
    }
    for (pl, r) in radii {
        if !r.is_positive() {
            return Err(Error::Domain(format!("radius at {pl} must be positive")));
        }
        if let Place::Finite(p) = pl {
            if as_power_of(r, *p).is_none() {
                return Err(Error::UnsnappedRadius(r.to_string(), *p));
            }
        }
    }
    Ok(())
}

fn box_volume(d: usize, radii: &[(Place, Rational)]) -> Rational {
    let mut vol = Rational::one();
    for (pl, r) in radii {
        let side = match pl {
            Place::Finite(_) => r.clone(),
            Place::Infinity => Rational::from_integer(Int::from(2 * REAL_ENLARGEMENT)) * r,
        };
        vol *= rat_pow(&side, d as i64);
    }
    vol
}

/// Point-free form of the contradiction: compare the box volume built from
/// the given snapped radii against the covolume lower bound at level n.
pub fn contradiction_bound(
    d: usize,
    window: &HeightWindow,
    s: &PlaceSet,
    radii: &[(Place, Rational)],
) -> Result<ContradictionCertificate> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if window.mode != s.mode() {
        return Err(Error::Domain(format!(
            "window mode {} does not match the place set ({})",
            window.mode,
            s.mode()
        )));
    }
    validate_radii(s, radii)?;
    let lower = pow2(-((d as i64 + 1) * (window.n as i64 + 1)));
    let upper = box_volume(d, radii);
    Ok(ContradictionCertificate {
        d,
        n: window.n,
        mode: window.mode,
        places: s.clone(),
        radii: radii.to_vec(),
        impossible: lower > upper,
        covolume_lower_bound: lower,
        box_volume: upper,
    })
}

/// Full form: check that the supplied points actually satisfy the simplex
/// hypotheses (affinely independent, inside the per-place balls around the
/// center with the real ball 6x enlarged, heights in the closed window),
/// then certify the volume contradiction.
pub fn volume_contradiction(
    points: &[Approximant],
    window: &HeightWindow,
    s: &PlaceSet,
    center: &[Rational],
    radii: &[(Place, Rational)],
) -> Result<ContradictionCertificate> {
    let rational: Vec<Vec<Rational>> = points
        .iter()
        .map(|a| a.point())
        .collect::<Result<_>>()?;
    let d = check_dims(&rational)?;
    if center.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: center.len(),
        });
    }
    if points.len() != d + 1 {
        return Err(Error::WrongArity {
            expected: d + 1,
            got: points.len(),
        });
    }
    if !affine_independent(&rational)? {
        return Err(Error::HypothesisFailure(
            "points are affinely dependent".into(),
        ));
    }
    validate_radii(s, radii)?;
    if window.mode != s.mode() {
        return Err(Error::Domain(format!(
            "window mode {} does not match the place set ({})",
            window.mode,
            s.mode()
        )));
    }
    for (i, (a, pt)) in points.iter().zip(&rational).enumerate() {
        if !window.contains_closed(a) {
            return Err(Error::HypothesisFailure(format!(
                "point {i} has height gauge {} outside the closed window at n={}",
                window.gauge(a),
                window.n
            )));
        }
        for (pl, r) in radii {
            let allowed = match pl {
                Place::Finite(_) => r.clone(),
                Place::Infinity => Rational::from_integer(Int::from(REAL_ENLARGEMENT)) * r,
            };
            for (xi, ci) in pt.iter().zip(center) {
                let dist = place_abs(&(xi - ci), *pl)?;
                let inside = match pl {
                    Place::Finite(_) => dist <= allowed,
                    Place::Infinity => dist < allowed,
                };
                if !inside {
                    return Err(Error::HypothesisFailure(format!(
                        "point {i} lies outside the ball at place {pl}: distance {dist} vs {allowed}"
                    )));
                }
            }
        }
    }
    contradiction_bound(d, window, s, radii)
}

/// Integral hyperplane c_1 x_1 + ... + c_d x_d = b in primitive form with
/// canonical sign (first nonzero c_i positive).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    coeffs: Vec<Int>, // (c_1, ..., c_d, b)
}

impl Hyperplane {
    pub fn d(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Full coefficient vector (c_1, ..., c_d, b).
    pub fn coefficients(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn normal(&self) -> &[Int] {
        &self.coeffs[..self.coeffs.len() - 1]
    }

    pub fn offset(&self) -> &Int {
        &self.coeffs[self.coeffs.len() - 1]
    }

    /// c . x - b
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: x.len(),
            });
        }
        let mut acc = -Rational::from_integer(self.offset().clone());
        for (c, xi) in self.normal().iter().zip(x) {
            acc += Rational::from_integer(c.clone()) * xi;
        }
        Ok(acc)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        matches!(self.eval(x), Ok(v) if v.is_zero())
    }

    /// Distance from x to the hyperplane in the sup norm at one place:
    /// |c.x - b| divided by the dual norm of c (max of |c_i|_p at a finite
    /// place, sum of |c_i| at the real place).
    pub fn place_distance(&self, x: &[Rational], place: Place) -> Result<Rational> {
        let num = place_abs(&self.eval(x)?, place)?;
        let mut dual = Rational::zero();
        for c in self.normal() {
            let a = place_abs(&Rational::from_integer(c.clone()), place)?;
            match place {
                Place::Finite(_) => {
                    if a > dual {
                        dual = a;
                    }
                }
                Place::Infinity => dual += a,
            }
        }
        debug_assert!(dual.is_positive(), "normal vector is nonzero");
        Ok(num / dual)
    }
}

fn rref(mut m: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone();
        for j in c..cols {
            let v = &m[r][j] / &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[i][j] - &f * &m[r][j];
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// If the affine hull of the points is a proper affine subspace of Q^d,
/// return a primitive integral hyperplane containing them all; None when
/// they span. The output depends only on the point set, not its order.
pub fn affine_hull_hyperplane(points: &[Vec<Rational>]) -> Result<Option<Hyperplane>> {
    let d = check_dims(points)?;
    // solve (r_i, -1) . (c, b) = 0; reduced row echelon form is unique for
    // the row space, so the chosen kernel vector is order-invariant
    let m: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut row: Vec<Rational> = p.to_vec();
            row.push(-Rational::one());
            row
        })
        .collect();
    let (m, pivots) = rref(m);
    if pivots.len() == d + 1 {
        return Ok(None);
    }
    let free = (0..=d)
        .find(|c| !pivots.contains(c))
        .expect("rank below d+1 leaves a free column");
    let mut u = vec![Rational::zero(); d + 1];
    u[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        u[pc] = -m[row][free].clone();
    }
    // clear denominators, divide by content, canonical sign
    let lcm = u.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<Int> = u.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    debug_assert!(!gcd.is_zero());
    for x in &mut ints {
        *x = &*x / &gcd;
    }
    let negate = ints[..d]
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    if negate {
        for x in &mut ints {
            *x = -&*x;
        }
    }
    debug_assert!(
        ints[..d].iter().any(|x| !x.is_zero()),
        "kernel vector with zero normal is impossible for rows (r, -1)"
    );
    Ok(Some(Hyperplane { coeffs: ints }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn pts(rows: &[&[&str]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|s| rat(s)).collect())
            .collect()
    }

    #[test]
    fn det_examples() {
        let a = build_a(&pts(&[&["1/2"], &["1/3"]])).unwrap();
        assert_eq!(det_exact(&a), rat("-1/6"));
        let b = build_a(&pts(&[&["0", "0"], &["1", "1"], &["2", "2"]])).unwrap();
        assert_eq!(det_exact(&b), rat("0"));
        let c = build_a(&pts(&[&["0", "0"], &["1", "0"], &["0", "1"]])).unwrap();
        assert_eq!(det_exact(&c), rat("1"));
    }

    #[test]
    fn independence_examples() {
        assert!(!affine_independent(&pts(&[&["0", "0"], &["1", "1"], &["2", "2"]])).unwrap());
        assert!(affine_independent(&pts(&[&["0", "0"], &["1", "0"], &["0", "1"]])).unwrap());
        assert!(affine_independent(&pts(&[&["1/2"], &["1/3"]])).unwrap());
        assert!(matches!(
            affine_independent(&pts(&[&["0", "0"], &["1", "1"]])),
            Err(Error::WrongArity { .. })
        ));
    }

    #[test]
    fn covolume_examples() {
        let a = build_a(&pts(&[&["1/2"], &["1/3"]])).unwrap();
        assert_eq!(covolume(&a, &"2,3".parse().unwrap()).unwrap(), rat("1"));
        let b = build_a(&pts(&[&["0", "0"], &["1", "0"], &["0", "1"]])).unwrap();
        assert_eq!(covolume(&b, &"5".parse().unwrap()).unwrap(), rat("1"));
        let c = build_a(&pts(&[&["1/3"], &["2/3"]])).unwrap();
        assert_eq!(covolume(&c, &"2,inf".parse().unwrap()).unwrap(), rat("1/3"));
        let sing = build_a(&pts(&[&["0", "0"], &["1", "1"], &["2", "2"]])).unwrap();
        assert!(matches!(
            covolume(&sing, &"2".parse().unwrap()),
            Err(Error::NotALattice)
        ));
    }

    #[test]
    fn det_bound_all_finite() {
        let s: PlaceSet = "2,3".parse().unwrap();
        let w = HeightWindow::for_set(1, &s);
        let pts = [
            Approximant::from_i64(&[1], 2),
            Approximant::from_i64(&[1], 3),
        ];
        let v = check_det_lower_bound(&pts, &w, &s).unwrap();
        assert_eq!(v.quantity, rat("6"));
        assert_eq!(v.bound, rat("1/16"));
        assert!(v.exceeds_bound);
        assert_eq!(v.closed_window, vec![true, true]);
    }

    #[test]
    fn det_bound_with_infinity() {
        let s: PlaceSet = "2,inf".parse().unwrap();
        let w = HeightWindow::for_set(1, &s);
        let pts = [
            Approximant::from_i64(&[1], 3),
            Approximant::from_i64(&[2], 3),
        ];
        let v = check_det_lower_bound(&pts, &w, &s).unwrap();
        assert_eq!(v.quantity, rat("1/3"));
        assert_eq!(v.bound, rat("1/16"));
        assert!(v.exceeds_bound);
    }

    #[test]
    fn det_bound_gates() {
        let s: PlaceSet = "2".parse().unwrap();
        let w = HeightWindow::for_set(1, &s);
        // collinear points in d=2
        let pts = [
            Approximant::from_i64(&[0, 0], 1),
            Approximant::from_i64(&[1, 1], 1),
            Approximant::from_i64(&[2, 2], 1),
        ];
        assert!(matches!(
            check_det_lower_bound(&pts, &w, &s),
            Err(Error::NotALattice)
        ));
        // height outside the open window
        let tall = [
            Approximant::from_i64(&[1], 2),
            Approximant::from_i64(&[5], 3),
        ];
        assert!(matches!(
            check_det_lower_bound(&tall, &w, &s),
            Err(Error::HypothesisFailure(_))
        ));
    }

    #[test]
    fn contradiction_symbolic_example() {
        // d=1, n=2 over S={3}: scheduled radius 1/3072 snaps to 3^-8
        let s: PlaceSet = "3".parse().unwrap();
        let w = HeightWindow::for_set(2, &s);
        let radii = vec![(Place::Finite(3), rat("1/6561"))];
        let c = contradiction_bound(1, &w, &s, &radii).unwrap();
        assert_eq!(c.covolume_lower_bound, rat("1/64"));
        assert_eq!(c.box_volume, rat("1/6561"));
        assert!(c.impossible);
        let js = c.to_json();
        assert_eq!(js["covolume_lower_bound"], "1/64");
        assert_eq!(js["impossible"], true);
    }

    #[test]
    fn contradiction_rejects_unsnapped_radius() {
        let s: PlaceSet = "3".parse().unwrap();
        let w = HeightWindow::for_set(2, &s);
        let radii = vec![(Place::Finite(3), rat("1/3072"))];
        assert!(matches!(
            contradiction_bound(1, &w, &s, &radii),
            Err(Error::UnsnappedRadius(..))
        ));
    }

    #[test]
    fn hyperplane_examples() {
        let h = affine_hull_hyperplane(&pts(&[&["0", "0"], &["1", "1"], &["2", "2"]]))
            .unwrap()
            .unwrap();
        assert_eq!(
            h.coefficients(),
            &[Int::from(1), Int::from(-1), Int::from(0)]
        );
        assert!(
            affine_hull_hyperplane(&pts(&[&["0", "0"], &["1", "0"], &["0", "1"]]))
                .unwrap()
                .is_none()
        );
        let single = affine_hull_hyperplane(&pts(&[&["1/2"]])).unwrap().unwrap();
        assert_eq!(single.coefficients(), &[Int::from(2), Int::from(1)]);
        assert!(single.contains(&[rat("1/2")]));
    }

    #[test]
    fn hyperplane_order_invariance() {
        let a = affine_hull_hyperplane(&pts(&[&["0", "0"], &["1", "1"], &["2", "2"]]))
            .unwrap()
            .unwrap();
        let b = affine_hull_hyperplane(&pts(&[&["2", "2"], &["0", "0"], &["1", "1"]]))
            .unwrap()
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hyperplane_distances() {
        // x_1 - x_2 = 0 against x = (1, 0)
        let h = affine_hull_hyperplane(&pts(&[&["0", "0"], &["1", "1"], &["2", "2"]]))
            .unwrap()
            .unwrap();
        let x = [rat("1"), rat("0")];
        assert_eq!(h.place_distance(&x, Place::Infinity).unwrap(), rat("1/2"));
        assert_eq!(h.place_distance(&x, Place::Finite(3)).unwrap(), rat("1"));
    }
}
