use crate::algebra::field::{Fe, Field};

/// Row-reduces `rows` in place to reduced row echelon form; returns pivot
/// columns.
pub fn rref(k: &Field, rows: &mut [Vec<Fe>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = k.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..nrows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c];
            for j in 0..ncols {
                let t = k.mul(factor, rows[r][j]);
                rows[i][j] = k.sub(rows[i][j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(k: &Field, rows: &[Vec<Fe>]) -> usize {
    let mut m = rows.to_vec();
    rref(k, &mut m).len()
}

/// Basis of the right kernel `{x : A x = 0}`; each basis vector has one free
/// coordinate set to one.
pub fn kernel(k: &Field, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(k, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Fe::ZERO; ncols];
            v[f] = Fe::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(m[r][f]);
            }
            v
        })
        .collect()
}

/// Solves `A x = b`; returns one solution or `None` when inconsistent.
pub fn solve(k: &Field, a: &[Vec<Fe>], b: &[Fe]) -> Option<Vec<Fe>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Fe>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(k, &mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Fe::ZERO; ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols];
    }
    Some(x)
}

pub type Mat3 = [[Fe; 3]; 3];

pub fn identity3() -> Mat3 {
    let mut m = [[Fe::ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Fe::ONE;
    }
    m
}

pub fn mat3_mul(k: &Field, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[Fe::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = k.sum((0..3).map(|l| k.mul(a[i][l], b[l][j])));
        }
    }
    out
}

pub fn mat3_apply(k: &Field, a: &Mat3, x: &[Fe; 3]) -> [Fe; 3] {
    let mut out = [Fe::ZERO; 3];
    for i in 0..3 {
        out[i] = k.sum((0..3).map(|l| k.mul(a[i][l], x[l])));
    }
    out
}

pub fn mat3_det(k: &Field, a: &Mat3) -> Fe {
    let t = |i: usize, j: usize, l: usize, m: usize| k.sub(k.mul(a[i][j], a[l][m]), k.mul(a[i][m], a[l][j]));
    let c0 = k.mul(a[0][0], t(1, 1, 2, 2));
    let c1 = k.mul(a[0][1], t(1, 0, 2, 2));
    let c2 = k.mul(a[0][2], t(1, 0, 2, 1));
    k.add(k.sub(c0, c1), c2)
}

pub fn mat3_adjugate(k: &Field, a: &Mat3) -> Mat3 {
    let mut adj = [[Fe::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let r: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let minor = k.sub(k.mul(a[r[0]][c[0]], a[r[1]][c[1]]), k.mul(a[r[0]][c[1]], a[r[1]][c[0]]));
            adj[i][j] = if (i + j) % 2 == 0 { minor } else { k.neg(minor) };
        }
    }
    adj
}

pub fn mat3_inverse(k: &Field, a: &Mat3) -> Option<Mat3> {
    let det = mat3_det(k, a);
    let inv = k.try_inv(det)?;
    let adj = mat3_adjugate(k, a);
    let mut out = adj;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = k.mul(*x, inv);
        }
    }
    Some(out)
}

/// Cross product: the line through two points, or the point on two lines.
pub fn cross(k: &Field, a: &[Fe; 3], b: &[Fe; 3]) -> [Fe; 3] {
    [
        k.sub(k.mul(a[1], b[2]), k.mul(a[2], b[1])),
        k.sub(k.mul(a[2], b[0]), k.mul(a[0], b[2])),
        k.sub(k.mul(a[0], b[1]), k.mul(a[1], b[0])),
    ]
}

pub fn dot(k: &Field, a: &[Fe; 3], b: &[Fe; 3]) -> Fe {
    k.sum((0..3).map(|i| k.mul(a[i], b[i])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::build_field;

    #[test]
    fn kernel_and_solve() {
        let k = build_field(5, &[0, 1]).unwrap();
        let e = |n: i64| k.from_i64(n);
        let a = vec![vec![e(1), e(2), e(3)], vec![e(2), e(4), e(0)]];
        let ker = kernel(&k, &a, 3);
        assert_eq!(ker.len(), 1);
        for row in &a {
            assert!(k.sum(row.iter().zip(&ker[0]).map(|(&x, &y)| k.mul(x, y))).is_zero());
        }
        let x = solve(&k, &a, &[e(1), e(2)]).unwrap();
        for (row, b) in a.iter().zip([e(1), e(2)]) {
            assert_eq!(k.sum(row.iter().zip(&x).map(|(&p, &q)| k.mul(p, q))), b);
        }
        assert!(solve(&k, &[vec![e(1), e(2)], vec![e(2), e(4)]], &[e(1), e(1)]).is_none());
    }

    #[test]
    fn inverse_3x3() {
        let k = build_field(3, &[1, 0, 1]).unwrap();
        let i = k.gen();
        let m = [[Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, Fe::ONE, i], [i, Fe::ZERO, Fe::ONE]];
        let inv = mat3_inverse(&k, &m).unwrap();
        assert_eq!(mat3_mul(&k, &m, &inv), identity3());
    }
}
