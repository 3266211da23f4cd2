use crate::action::ProjMap;
use crate::algebra::linalg::{cross, dot, mat3_inverse, mat3_mul, solve, Mat3};
use crate::algebra::{Fe, Field};
use crate::curve::{PlaneCurve, ProjPoint};
use crate::error::{Error, Result};

/// Largest number of marks for which every assignment is tried.
const MAX_PERMUTED_MARKS: usize = 7;
/// Bound on brute-force frame completions.
const MAX_COMPLETIONS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Equivalence {
    /// `map` sends model B onto model A, and mark `i` of B to mark
    /// `assignment[i]` of A.
    Found { map: ProjMap, assignment: Vec<usize> },
    /// Every mark-compatible candidate was excluded.
    NotEquivalent { reason: String },
}

pub(crate) fn general_position(k: &Field, pts: &[[Fe; 3]]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let l = cross(k, &pts[i], &pts[j]);
            if l.iter().all(|c| c.is_zero()) {
                return false;
            }
            for (m, p) in pts.iter().enumerate() {
                if m != i && m != j && dot(k, &l, p).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// The matrix sending the standard frame to four points in general position.
fn frame_matrix(k: &Field, p: &[[Fe; 3]; 4]) -> Option<Mat3> {
    let a: Vec<Vec<Fe>> = (0..3).map(|r| (0..3).map(|c| p[c][r]).collect()).collect();
    let lam = solve(k, &a, &p[3])?;
    let mut m = [[Fe::ZERO; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            m[r][c] = k.mul(p[c][r], lam[c]);
        }
    }
    Some(m)
}

/// The unique map sending `from[i]` to `to[i]`.
pub(crate) fn map_from_frames(k: &Field, from: &[[Fe; 3]; 4], to: &[[Fe; 3]; 4]) -> Option<ProjMap> {
    let nb = frame_matrix(k, from)?;
    let na = frame_matrix(k, to)?;
    ProjMap::new(k, mat3_mul(k, &na, &mat3_inverse(k, &nb)?)).ok()
}

struct Search<'a> {
    k: &'a Field,
    a: &'a PlaneCurve,
    b: &'a PlaneCurve,
}

impl Search<'_> {
    fn accepts(&self, m: &ProjMap, pairs: &[(ProjPoint, ProjPoint)]) -> bool {
        if pairs.iter().any(|(b, a)| m.apply(b) != *a) {
            return false;
        }
        if !self.b.rational_points().iter().all(|p| self.a.contains(&m.apply_coords(p.coords()))) {
            return false;
        }
        let moved = self.a.form().compose_linear(m.matrix());
        let Some((e, lead)) = self.b.form().leading_term() else { return false };
        let ratio = self.k.div(moved.coeff(e), lead);
        !ratio.is_zero() && moved == self.b.form().scale(ratio)
    }

    /// A map compatible with the paired marks, completing the frame from
    /// rational points of both curves when the marks are too degenerate.
    fn find(&self, pairs: &[(ProjPoint, ProjPoint)]) -> Result<Option<ProjMap>> {
        let k = self.k;
        let mut frame: Vec<(ProjPoint, ProjPoint)> = Vec::new();
        for pr in pairs {
            if frame.len() == 4 {
                break;
            }
            let mut bs: Vec<[Fe; 3]> = frame.iter().map(|f| *f.0.coords()).collect();
            let mut as_: Vec<[Fe; 3]> = frame.iter().map(|f| *f.1.coords()).collect();
            bs.push(*pr.0.coords());
            as_.push(*pr.1.coords());
            if general_position(k, &bs) && general_position(k, &as_) {
                frame.push(*pr);
            }
        }
        // complete the B side from curve points, then search the A side
        let mut b_frame: Vec<[Fe; 3]> = frame.iter().map(|f| *f.0.coords()).collect();
        for p in self.b.rational_points() {
            if b_frame.len() == 4 {
                break;
            }
            let mut t = b_frame.clone();
            t.push(*p.coords());
            if general_position(k, &t) {
                b_frame = t;
            }
        }
        if b_frame.len() < 4 {
            return Err(Error::InsufficientMarks);
        }
        let missing = 4 - frame.len();
        let a_pts = self.a.rational_points();
        if a_pts.len().saturating_pow(missing as u32) > MAX_COMPLETIONS {
            return Err(Error::InsufficientMarks);
        }
        let fixed: Vec<[Fe; 3]> = frame.iter().map(|f| *f.1.coords()).collect();
        let from: [[Fe; 3]; 4] = [b_frame[0], b_frame[1], b_frame[2], b_frame[3]];
        let mut choice = vec![0usize; missing];
        loop {
            let mut to = fixed.clone();
            to.extend(choice.iter().map(|&i| *a_pts[i].coords()));
            if general_position(k, &to) {
                let to: [[Fe; 3]; 4] = [to[0], to[1], to[2], to[3]];
                if let Some(m) = map_from_frames(k, &from, &to) {
                    if self.accepts(&m, pairs) {
                        return Ok(Some(m));
                    }
                }
            }
            // next tuple in lexicographic order
            let mut pos = missing;
            loop {
                if pos == 0 {
                    return Ok(None);
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < a_pts.len() {
                    break;
                }
                choice[pos] = 0;
            }
            if missing == 0 {
                return Ok(None);
            }
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Searches for `M` with `Φ_A(M x) ∝ Φ_B(x)` sending the marks of B to the
/// marks of A. Assignments of marks are tried in lexicographic order and the
/// first verified map is returned.
pub fn projective_equivalence(
    a: &PlaneCurve,
    marks_a: &[ProjPoint],
    b: &PlaneCurve,
    marks_b: &[ProjPoint],
) -> Result<Equivalence> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if marks_a.len() != marks_b.len() {
        return Err(Error::Precondition("models carry different numbers of marks".into()));
    }
    if a.degree() != b.degree() {
        return Ok(Equivalence::NotEquivalent {
            reason: format!("degrees differ: {} vs {}", a.degree(), b.degree()),
        });
    }
    let search = Search { k: a.field(), a, b };
    let n = marks_a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let pairs: Vec<(ProjPoint, ProjPoint)> = (0..n).map(|i| (marks_b[i], marks_a[perm[i]])).collect();
        if let Some(map) = search.find(&pairs)? {
            return Ok(Equivalence::Found { map, assignment: perm });
        }
        if n > MAX_PERMUTED_MARKS || !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(Equivalence::NotEquivalent { reason: "no mark-compatible map preserves the models".into() })
}
