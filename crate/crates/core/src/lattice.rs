//! Exact 2×2 integer lattice algebra.
//!
//! A [`LatticeMatrix`] `[[a, c], [b, d]]` describes the sublattice of ℤ² spanned by its
//! columns `(a, b)` and `(c, d)`. Hermite normal forms are lower triangular and are
//! reached by unimodular column operations.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("singular matrix {0}")]
    Singular(LatticeMatrix),
    #[error("{sub} is not a sublattice of {sup}")]
    NotSublattice { sub: LatticeMatrix, sup: LatticeMatrix },
    #[error("cannot parse matrix {0:?}: expected four comma-separated integers a,c,b,d")]
    Parse(String),
}

/// 2×2 integer matrix, stored by entry name: first row `(a, c)`, second row `(b, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 4]", from = "[i64; 4]")]
pub struct LatticeMatrix {
    pub a: i64,
    pub c: i64,
    pub b: i64,
    pub d: i64,
}

impl From<LatticeMatrix> for [i64; 4] {
    fn from(m: LatticeMatrix) -> Self {
        [m.a, m.c, m.b, m.d]
    }
}

impl From<[i64; 4]> for LatticeMatrix {
    fn from([a, c, b, d]: [i64; 4]) -> Self {
        LatticeMatrix { a, c, b, d }
    }
}

impl LatticeMatrix {
    pub const IDENTITY: LatticeMatrix = LatticeMatrix { a: 1, c: 0, b: 0, d: 1 };

    /// Builds from rows `[[a, c], [b, d]]`.
    pub const fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        LatticeMatrix { a: rows[0][0], c: rows[0][1], b: rows[1][0], d: rows[1][1] }
    }

    pub const fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.c], [self.b, self.d]]
    }

    pub const fn diag(x: i64, y: i64) -> Self {
        LatticeMatrix { a: x, c: 0, b: 0, d: y }
    }

    pub const fn scalar(k: i64) -> Self {
        Self::diag(k, k)
    }

    pub fn columns(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn from_columns(first: [i64; 2], second: [i64; 2]) -> Self {
        LatticeMatrix { a: first[0], b: first[1], c: second[0], d: second[1] }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, rhs: &LatticeMatrix) -> LatticeMatrix {
        LatticeMatrix {
            a: self.a * rhs.a + self.c * rhs.b,
            c: self.a * rhs.c + self.c * rhs.d,
            b: self.b * rhs.a + self.d * rhs.b,
            d: self.b * rhs.c + self.d * rhs.d,
        }
    }

    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        [self.a * v[0] + self.c * v[1], self.b * v[0] + self.d * v[1]]
    }

    pub fn scale(&self, k: i64) -> LatticeMatrix {
        LatticeMatrix { a: k * self.a, c: k * self.c, b: k * self.b, d: k * self.d }
    }

    /// Adjugate: `self · adj = det · I`.
    pub fn adjugate(&self) -> LatticeMatrix {
        LatticeMatrix { a: self.d, c: -self.c, b: -self.b, d: self.a }
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Integer coordinates of `v` in the column basis, if `v` lies in the column lattice.
    pub fn solve(&self, v: [i64; 2]) -> Option<[i64; 2]> {
        let det = self.det();
        if det == 0 {
            return None;
        }
        let w = self.adjugate().apply(v);
        (w[0] % det == 0 && w[1] % det == 0).then(|| [w[0] / det, w[1] / det])
    }

    /// True when `v` lies in the column lattice.
    pub fn contains(&self, v: [i64; 2]) -> bool {
        self.solve(v).is_some()
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.c, self.b, self.d)
    }
}

impl FromStr for LatticeMatrix {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| LatticeError::Parse(s.to_string()))?;
        match parts[..] {
            [a, c, b, d] => Ok(LatticeMatrix { a, c, b, d }),
            _ => Err(LatticeError::Parse(s.to_string())),
        }
    }
}

/// Lower-triangular Hermite form `[[diag_a, 0], [sub_b, diag_d]]`.
///
/// Ordered lexicographically by `(diag_a, sub_b, diag_d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HermiteForm {
    pub diag_a: i64,
    pub sub_b: i64,
    pub diag_d: i64,
}

impl HermiteForm {
    pub fn matrix(&self) -> LatticeMatrix {
        LatticeMatrix { a: self.diag_a, c: 0, b: self.sub_b, d: self.diag_d }
    }

    pub fn index(&self) -> i64 {
        self.diag_a * self.diag_d
    }

    /// Canonical representative of `v` modulo the lattice: `x ∈ [0, a)`, `y ∈ [0, d)`.
    pub fn reduce(&self, v: [i64; 2]) -> [i64; 2] {
        let q = v[0].div_euclid(self.diag_a);
        let x = v[0] - q * self.diag_a;
        let y = (v[1] - q * self.sub_b).rem_euclid(self.diag_d);
        [x, y]
    }

    /// Position of a reduced residue in `0..index()`.
    pub fn residue_index(&self, r: [i64; 2]) -> usize {
        (r[0] * self.diag_d + r[1]) as usize
    }

    /// All reduced residues in `residue_index` order.
    pub fn residues(&self) -> impl Iterator<Item = [i64; 2]> + '_ {
        (0..self.diag_a).flat_map(move |x| (0..self.diag_d).map(move |y| [x, y]))
    }
}

impl fmt::Display for HermiteForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},0],[{},{}]]", self.diag_a, self.sub_b, self.diag_d)
    }
}

pub fn det(m: &LatticeMatrix) -> i64 {
    m.det()
}

/// Hermite normal form together with a unimodular `U` such that `m · U = H`.
pub fn hnf(m: &LatticeMatrix) -> Result<(HermiteForm, LatticeMatrix), LatticeError> {
    if m.det() == 0 {
        return Err(LatticeError::Singular(*m));
    }
    // Clear the top-right entry with an extended-gcd column operation.
    let ext = m.a.extended_gcd(&m.c);
    let (mut g, mut x, mut y) = (ext.gcd, ext.x, ext.y);
    if g < 0 {
        g = -g;
        x = -x;
        y = -y;
    }
    let (ap, cp) = (m.a / g, m.c / g);
    let mut u = LatticeMatrix { a: x, c: -cp, b: y, d: ap };
    let mut h = m.mul(&u);
    debug_assert_eq!((h.a, h.c), (g, 0));
    if h.d < 0 {
        let flip = LatticeMatrix::diag(1, -1);
        u = u.mul(&flip);
        h = h.mul(&flip);
    }
    let q = h.b.div_euclid(h.d);
    let shear = LatticeMatrix { a: 1, c: 0, b: -q, d: 1 };
    u = u.mul(&shear);
    h = h.mul(&shear);
    Ok((HermiteForm { diag_a: h.a, sub_b: h.b, diag_d: h.d }, u))
}

/// Sum of the divisors of `n`.
pub fn sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

/// Every sublattice of ℤ² of index `n`, as Hermite forms sorted by `(diag_d, sub_b)`.
pub fn sublattices_of_index(n: u64) -> Vec<HermiteForm> {
    let n = n as i64;
    (1..=n)
        .filter(|d| n % d == 0)
        .flat_map(|d| (0..d).map(move |b| HermiteForm { diag_a: n / d, sub_b: b, diag_d: d }))
        .collect()
}

/// The σ(n) matrix classes of n-sheeted covers, one Hermite form each, without merging
/// forms related by point-group symmetries.
pub fn paper_cover_classes(n: u64) -> Vec<HermiteForm> {
    sublattices_of_index(n)
}

/// True when every column of `sub` lies in the column lattice of `sup`.
pub fn is_sublattice(sub: &LatticeMatrix, sup: &LatticeMatrix) -> bool {
    sup.det() != 0 && sub.columns().iter().all(|col| sup.contains(*col))
}

/// `[sup : sub]`, failing when `sub` is not contained in `sup`.
pub fn quotient_index(sup: &LatticeMatrix, sub: &LatticeMatrix) -> Result<i64, LatticeError> {
    if sub.det() == 0 {
        return Err(LatticeError::Singular(*sub));
    }
    if sup.det() == 0 {
        return Err(LatticeError::Singular(*sup));
    }
    if !is_sublattice(sub, sup) {
        return Err(LatticeError::NotSublattice { sub: *sub, sup: *sup });
    }
    Ok(sub.det().abs() / sup.det().abs())
}

/// True when `a · L = L` as sets.
pub fn is_invariant(lattice: &LatticeMatrix, a: &LatticeMatrix) -> bool {
    is_sublattice(&a.mul(lattice), lattice)
}

/// Least `hnf(A · m)` over `A` in the group, by `(diag_a, sub_b, diag_d)`.
pub fn canonical_under_pointgroup(m: &LatticeMatrix, group: &[LatticeMatrix]) -> Result<LatticeMatrix, LatticeError> {
    let identity = [LatticeMatrix::IDENTITY];
    let group = if group.is_empty() { &identity[..] } else { group };
    let mut best: Option<HermiteForm> = None;
    for a in group {
        let (h, _) = hnf(&a.mul(m))?;
        if best.is_none_or(|b| h < b) {
            best = Some(h);
        }
    }
    Ok(best.expect("group is non-empty").matrix())
}

/// Closes a set of invertible integer matrices under multiplication.
pub fn generate_group(generators: &[LatticeMatrix]) -> Vec<LatticeMatrix> {
    let mut elems = vec![LatticeMatrix::IDENTITY];
    let mut i = 0;
    while i < elems.len() {
        for g in generators {
            let p = elems[i].mul(g);
            if !elems.contains(&p) {
                elems.push(p);
            }
        }
        i += 1;
    }
    elems.sort();
    elems
}

/// Rotation by 60° in a hexagonal basis.
pub const HEX_ROTATION: LatticeMatrix = LatticeMatrix::from_rows([[0, -1], [1, 1]]);
/// Reflection generating D6 with [`HEX_ROTATION`].
pub const HEX_REFLECTION: LatticeMatrix = LatticeMatrix::from_rows([[-1, -1], [0, 1]]);
/// Rotation by 90° in a square basis.
pub const SQUARE_ROTATION: LatticeMatrix = LatticeMatrix::from_rows([[0, 1], [-1, 0]]);
/// Reflection generating D4 with [`SQUARE_ROTATION`].
pub const SQUARE_REFLECTION: LatticeMatrix = LatticeMatrix::from_rows([[-1, 0], [0, 1]]);
/// Half-turn.
pub const HALF_TURN: LatticeMatrix = LatticeMatrix::scalar(-1);

pub fn d6() -> Vec<LatticeMatrix> {
    generate_group(&[HEX_ROTATION, HEX_REFLECTION])
}

pub fn d4() -> Vec<LatticeMatrix> {
    generate_group(&[SQUARE_ROTATION, SQUARE_REFLECTION])
}

pub fn z6() -> Vec<LatticeMatrix> {
    generate_group(&[HEX_ROTATION])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn lattice_points(m: &LatticeMatrix, r: i64) -> BTreeSet<[i64; 2]> {
        let mut pts = BTreeSet::new();
        for x in -r..=r {
            for y in -r..=r {
                let [c1, c2] = m.columns();
                pts.insert([x * c1[0] + y * c2[0], x * c1[1] + y * c2[1]]);
            }
        }
        pts
    }

    /// Residues of the column lattice modulo `n ℤ²`; determines any lattice containing `n ℤ²`.
    fn residue_signature(m: &LatticeMatrix, n: i64) -> Vec<bool> {
        let mut seen = vec![false; (n * n) as usize];
        let [c1, c2] = m.columns();
        for x in 0..n {
            for y in 0..n {
                let p = [(x * c1[0] + y * c2[0]).rem_euclid(n), (x * c1[1] + y * c2[1]).rem_euclid(n)];
                seen[(p[0] * n + p[1]) as usize] = true;
            }
        }
        seen
    }

    fn brute_force_sublattice_count(n: i64) -> usize {
        let mut classes = BTreeSet::new();
        for a in -n..=n {
            for b in -n..=n {
                for c in -n..=n {
                    for d in -n..=n {
                        let m = LatticeMatrix { a, c, b, d };
                        if m.det().abs() == n {
                            classes.insert(residue_signature(&m, n));
                        }
                    }
                }
            }
        }
        classes.len()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det(&LatticeMatrix::IDENTITY), 1);
        assert_eq!(det(&LatticeMatrix::diag(5, 3)), 15);
        assert_eq!(det(&LatticeMatrix::from_rows([[3, 1], [0, 2]])), 6);
    }

    #[test]
    fn hnf_examples() {
        let (h, _) = hnf(&LatticeMatrix::diag(2, 1)).unwrap();
        assert_eq!(h.matrix(), LatticeMatrix::diag(2, 1));
        let (h, _) = hnf(&LatticeMatrix::from_rows([[2, 1], [1, 1]])).unwrap();
        assert_eq!(h.matrix(), LatticeMatrix::IDENTITY);
        let m = LatticeMatrix::from_rows([[3, 1], [0, 2]]);
        let (h, u) = hnf(&m).unwrap();
        assert_eq!(h.matrix(), LatticeMatrix::from_rows([[1, 0], [2, 6]]));
        assert_eq!(m.mul(&u), h.matrix());
        // Same column lattice, checked on a window of points well inside both spans.
        let inner = |p: &[i64; 2]| p[0].abs() <= 10 && p[1].abs() <= 10;
        let lhs: BTreeSet<_> = lattice_points(&m, 20).into_iter().filter(inner).collect();
        let rhs: BTreeSet<_> = lattice_points(&h.matrix(), 40).into_iter().filter(inner).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn hnf_rejects_singular() {
        assert!(matches!(hnf(&LatticeMatrix::from_rows([[2, 4], [1, 2]])), Err(LatticeError::Singular(_))));
    }

    #[test]
    fn sublattice_examples() {
        assert_eq!(sublattices_of_index(1), vec![HermiteForm { diag_a: 1, sub_b: 0, diag_d: 1 }]);
        let two: Vec<_> = sublattices_of_index(2).iter().map(HermiteForm::matrix).collect();
        assert_eq!(
            two,
            vec![LatticeMatrix::diag(2, 1), LatticeMatrix::diag(1, 2), LatticeMatrix::from_rows([[1, 0], [1, 2]]),]
        );
        assert_eq!(sublattices_of_index(6).len(), 12);
        let counts: Vec<usize> = (1..=12).map(|n| paper_cover_classes(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 4, 7, 6, 12, 8, 15, 13, 18, 12, 28]);
    }

    #[test]
    fn sublattice_counts_match_brute_force() {
        for n in 1..=7 {
            assert_eq!(sublattices_of_index(n as u64).len(), brute_force_sublattice_count(n), "n = {n}");
        }
    }

    #[test]
    fn sublattice_lists_are_sigma_sized_and_distinct() {
        for n in 1..=64u64 {
            let forms = sublattices_of_index(n);
            assert_eq!(forms.len() as u64, sigma(n));
            let sigs: BTreeSet<_> = forms.iter().map(|h| residue_signature(&h.matrix(), n as i64)).collect();
            assert_eq!(sigs.len(), forms.len());
            assert!(forms.windows(2).all(|w| (w[0].diag_d, w[0].sub_b) < (w[1].diag_d, w[1].sub_b)));
        }
    }

    #[test]
    fn containment_examples() {
        let k = LatticeMatrix::IDENTITY;
        let l = LatticeMatrix::diag(5, 3);
        assert!(is_sublattice(&l, &l));
        assert_eq!(quotient_index(&l, &l), Ok(1));
        assert!(is_sublattice(&l, &k));
        assert_eq!(quotient_index(&k, &l), Ok(15));
        let two = LatticeMatrix::scalar(2);
        assert!(!is_sublattice(&LatticeMatrix::diag(1, 2), &two));
        assert!(matches!(quotient_index(&two, &LatticeMatrix::diag(1, 2)), Err(LatticeError::NotSublattice { .. })));
    }

    #[test]
    fn canonical_form_merges_square_pair() {
        assert_eq!(
            canonical_under_pointgroup(&LatticeMatrix::from_rows([[3, 1], [0, 2]]), &[]).unwrap(),
            hnf(&LatticeMatrix::from_rows([[3, 1], [0, 2]])).unwrap().0.matrix()
        );
        let group = d4();
        let m1 = LatticeMatrix::diag(2, 1);
        let m2 = LatticeMatrix::diag(1, 2);
        // Exhaustive witness search for m1 = A · m2 · B.
        let small_unimodular: Vec<LatticeMatrix> = (-2..=2)
            .flat_map(|a| {
                (-2..=2)
                    .flat_map(move |c| (-2..=2).flat_map(move |b| (-2..=2).map(move |d| LatticeMatrix { a, c, b, d })))
            })
            .filter(LatticeMatrix::is_unimodular)
            .collect();
        let witnessed = group.iter().any(|a| small_unimodular.iter().any(|b| a.mul(&m2).mul(b) == m1));
        assert!(witnessed);
        assert_eq!(canonical_under_pointgroup(&m1, &group).unwrap(), canonical_under_pointgroup(&m2, &group).unwrap());
    }

    #[test]
    fn point_groups_have_expected_orders() {
        assert_eq!(d6().len(), 12);
        assert_eq!(d4().len(), 8);
        assert_eq!(z6().len(), 6);
        for g in [d6(), d4(), z6()] {
            assert!(g.contains(&HALF_TURN));
        }
    }

    #[test]
    fn matrix_string_roundtrip() {
        let m: LatticeMatrix = "2,0,1,3".parse().unwrap();
        assert_eq!(m, LatticeMatrix { a: 2, c: 0, b: 1, d: 3 });
        assert_eq!(m.to_string(), "2,0,1,3");
        assert!("1,2,3".parse::<LatticeMatrix>().is_err());
        assert!("x,0,0,1".parse::<LatticeMatrix>().is_err());
    }

    fn nonsingular() -> impl Strategy<Value = LatticeMatrix> {
        (-12i64..=12, -12i64..=12, -12i64..=12, -12i64..=12)
            .prop_map(|(a, c, b, d)| LatticeMatrix { a, c, b, d })
            .prop_filter("nonsingular", |m| m.det() != 0)
    }

    fn unimodular() -> impl Strategy<Value = LatticeMatrix> {
        proptest::collection::vec(0usize..4, 0..8).prop_map(|steps| {
            let ops = [
                LatticeMatrix::from_rows([[1, 1], [0, 1]]),
                LatticeMatrix::from_rows([[1, 0], [1, 1]]),
                LatticeMatrix::from_rows([[0, 1], [1, 0]]),
                LatticeMatrix::diag(-1, 1),
            ];
            steps.iter().fold(LatticeMatrix::IDENTITY, |acc, &i| acc.mul(&ops[i]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn hnf_invariants(m in nonsingular()) {
            let (h, u) = hnf(&m).unwrap();
            prop_assert_eq!(m.mul(&u), h.matrix());
            prop_assert!(u.is_unimodular());
            prop_assert!(h.diag_a > 0 && h.diag_d > 0);
            prop_assert!(0 <= h.sub_b && h.sub_b < h.diag_d);
            prop_assert_eq!(h.index(), m.det().abs());
            prop_assert_eq!(hnf(&h.matrix()).unwrap().0, h);
        }

        #[test]
        fn hnf_is_basis_independent(m in nonsingular(), u in unimodular()) {
            prop_assert_eq!(hnf(&m.mul(&u)).unwrap().0, hnf(&m).unwrap().0);
        }

        #[test]
        fn canonical_form_is_orbit_constant(m in nonsingular(), i in 0usize..12) {
            let group = d6();
            let c = canonical_under_pointgroup(&m, &group).unwrap();
            prop_assert_eq!(canonical_under_pointgroup(&group[i].mul(&m), &group).unwrap(), c);
            prop_assert_eq!(canonical_under_pointgroup(&c, &group).unwrap(), c);
            prop_assert_eq!(c.det().abs(), m.det().abs());
        }

        #[test]
        fn residue_reduction_is_canonical(m in nonsingular(), x in -50i64..50, y in -50i64..50) {
            let (h, _) = hnf(&m).unwrap();
            let r = h.reduce([x, y]);
            prop_assert!(r[0] >= 0 && r[0] < h.diag_a && r[1] >= 0 && r[1] < h.diag_d);
            prop_assert!(m.contains([x - r[0], y - r[1]]));
        }
    }
}
