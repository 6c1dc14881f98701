//! Small dense 4x4 helpers used by charts and constitutive tensors.

pub type Mat4 = [[f64; 4]; 4];

pub const IDENTITY4: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

pub const MINKOWSKI: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
];

pub fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

pub fn det4(m: &Mat4) -> f64 {
    // cofactor expansion along the first row
    let mut det = 0.0;
    for j in 0..4 {
        det += m[0][j] * cofactor(m, 0, j);
    }
    det
}

fn cofactor(m: &Mat4, row: usize, col: usize) -> f64 {
    let mut sub = [[0.0; 3]; 3];
    let mut r = 0;
    for i in 0..4 {
        if i == row {
            continue;
        }
        let mut c = 0;
        for j in 0..4 {
            if j == col {
                continue;
            }
            sub[r][c] = m[i][j];
            c += 1;
        }
        r += 1;
    }
    let d3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
        - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
        + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
    if (row + col) % 2 == 0 {
        d3
    } else {
        -d3
    }
}

pub fn inv4(m: &Mat4) -> Option<Mat4> {
    let det = det4(m);
    if det.abs() < 1e-300 {
        return None;
    }
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            // adjugate transpose
            out[j][i] = cofactor(m, i, j) / det;
        }
    }
    Some(out)
}

/// Eigenvalues of a symmetric 4x4 matrix via cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &Mat4) -> [f64; 4] {
    let mut a = *m;
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                if a[p][q].abs() < 1e-30 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    [a[0][0], a[1][1], a[2][2], a[3][3]]
}
