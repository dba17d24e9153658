//! Test-only oracles and fixtures, written independently of the library's
//! numerical paths.
#![allow(dead_code, clippy::needless_range_loop)]

use dfs_core::{LabeledDataset, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gauss(r: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(r)
}

/// Random labeled data with every class present and class-shifted means.
pub fn random_dataset(r: &mut ChaCha8Rng, n: usize, d: usize, c: usize) -> LabeledDataset<f64> {
    let mut labels: Vec<usize> = (0..n).map(|i| if i < c { i } else { r.random_range(0..c) }).collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        labels.swap(i, j);
    }
    let shifts: Vec<Vec<f64>> = (0..c).map(|_| (0..d).map(|_| gauss(r) * 2.0).collect()).collect();
    let scales: Vec<f64> = (0..d).map(|_| 0.5 + r.random::<f64>() * 3.0).collect();
    let x = Matrix::from_fn(n, d, |i, j| scales[j] * (shifts[labels[i]][j] + gauss(r)));
    LabeledDataset::new(x, labels).unwrap()
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| (0..cols).map(|_| gauss(r)).collect()).collect()
}

pub fn random_symmetric(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = gauss(r);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// `B·Bᵀ + shift·I` for random `B`.
pub fn random_spd(r: &mut ChaCha8Rng, n: usize, shift: f64) -> Vec<Vec<f64>> {
    let b = random_matrix(r, n, n);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = (0..n).map(|k| b[i][k] * b[j][k]).sum::<f64>();
        }
        m[i][i] += shift;
    }
    m
}

pub fn to_rows(m: &Matrix<f64>) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Eigenvalues of a symmetric matrix by classical (largest off-diagonal
/// pivot) Jacobi, ascending.
pub fn reference_symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..(200 * n * n).max(1) {
        let (mut p, mut q, mut best) = (0, 0, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if a[i][j].abs() > best {
                    best = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        let scale: f64 = (0..n).map(|i| a[i][i].abs()).fold(1e-300, f64::max);
        if best <= 1e-15 * scale {
            break;
        }
        let phi = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
        let (s, c) = phi.sin_cos();
        for k in 0..n {
            let (akp, akq) = (a[k][p], a[k][q]);
            a[k][p] = c * akp - s * akq;
            a[k][q] = s * akp + c * akq;
        }
        for k in 0..n {
            let (apk, aqk) = (a[p][k], a[q][k]);
            a[p][k] = c * apk - s * aqk;
            a[q][k] = s * apk + c * aqk;
        }
    }
    let mut w: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    w.sort_by(|x, y| x.partial_cmp(y).unwrap());
    w
}

/// Full generalized spectrum via explicit `L⁻¹` and a classical Jacobi.
pub fn reference_generalized_eigenvalues(lhs: &[Vec<f64>], rhs: &[Vec<f64>]) -> Vec<f64> {
    let n = lhs.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = rhs[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut linv = vec![vec![0.0; n]; n];
    for col in 0..n {
        for i in 0..n {
            let e = if i == col { 1.0 } else { 0.0 };
            let s: f64 = e - (0..i).map(|k| l[i][k] * linv[k][col]).sum::<f64>();
            linv[i][col] = s / l[i][i];
        }
    }
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += linv[i][a] * lhs[a][b] * linv[j][b];
                }
            }
            c[i][j] = s;
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[i][j] + c[j][i]);
            c[i][j] = avg;
            c[j][i] = avg;
        }
    }
    reference_symmetric_eigenvalues(&c)
}

/// Between/within variance ratio of one feature.
pub fn fisher_ratio(data: &LabeledDataset<f64>, j: usize) -> f64 {
    let x = data.features().col(j);
    let y = data.labels();
    let c = data.n_classes();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let mut between = 0.0;
    let mut within = 0.0;
    for k in 0..c {
        let vals: Vec<f64> = x.iter().zip(y).filter(|(_, &l)| l == k).map(|(&v, _)| v).collect();
        let mk = vals.iter().sum::<f64>() / vals.len() as f64;
        between += vals.len() as f64 * (mk - mean).powi(2);
        within += vals.iter().map(|v| (v - mk).powi(2)).sum::<f64>();
    }
    between / within
}

pub type Dense = Vec<Vec<f64>>;

/// Direct double-sum scatter matrices `(st, sb, sw)`.
pub fn reference_scatter(data: &LabeledDataset<f64>) -> (Dense, Dense, Dense) {
    let (n, d) = data.features().shape();
    let c = data.n_classes();
    let x = data.features();
    let y = data.labels();
    let mu: Vec<f64> = (0..d).map(|j| (0..n).map(|i| x[(i, j)]).sum::<f64>() / n as f64).collect();
    let mut mk = vec![vec![0.0; d]; c];
    let mut nk = vec![0.0; c];
    for i in 0..n {
        nk[y[i]] += 1.0;
        for j in 0..d {
            mk[y[i]][j] += x[(i, j)];
        }
    }
    for k in 0..c {
        for j in 0..d {
            mk[k][j] /= nk[k];
        }
    }
    let mut st = vec![vec![0.0; d]; d];
    let mut sb = vec![vec![0.0; d]; d];
    let mut sw = vec![vec![0.0; d]; d];
    for a in 0..d {
        for b in 0..d {
            for i in 0..n {
                st[a][b] += (x[(i, a)] - mu[a]) * (x[(i, b)] - mu[b]);
                sw[a][b] += (x[(i, a)] - mk[y[i]][a]) * (x[(i, b)] - mk[y[i]][b]);
            }
            for k in 0..c {
                sb[a][b] += nk[k] * (mk[k][a] - mu[a]) * (mk[k][b] - mu[b]);
            }
        }
    }
    (st, sb, sw)
}

/// Scalar-loop evaluation of the smoothed objective.
pub fn reference_objective(a: &[Vec<f64>], sb: &[Vec<f64>], gamma: f64, p: f64, zeta: f64) -> f64 {
    let d = a.len();
    let l = a[0].len();
    let mut tr = 0.0;
    for col in 0..l {
        for i in 0..d {
            for j in 0..d {
                tr += a[i][col] * sb[i][j] * a[j][col];
            }
        }
    }
    let mut pen = 0.0;
    for row in a {
        let sq: f64 = row.iter().map(|v| v * v).sum();
        pen += (sq + zeta).powf(p / 2.0);
    }
    -tr + gamma * pen
}
