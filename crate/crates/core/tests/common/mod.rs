//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use fair_cmab::{FamilySpec, FeasibleFamily, Instance};
use rand::seq::SliceRandom;
use rand::Rng;

/// Solves a square system by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is (numerically) singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Best benchmark reward by enumerating every vertex of the feasible
/// polytope: a support of `k` members plus `k - 1` tight fairness rows.
pub fn brute_force_benchmark(instance: &Instance, delta: f64) -> Option<f64> {
    let members = instance.family().members();
    let means = instance.means();
    let n = instance.num_arms();
    let rewards: Vec<f64> = members.iter().map(|s| instance.expected_reward(s)).collect();
    let coeff = |row: usize, col: usize| if members[col].contains(row) { means[row] } else { 0.0 };
    let rhs: Vec<f64> = instance.targets().iter().map(|l| l + delta).collect();

    let mut best: Option<f64> = None;
    for k in 1..=members.len().min(n + 1) {
        for support in combinations(members.len(), k) {
            for tight in combinations(n, k - 1) {
                let mut a = vec![vec![1.0; k]];
                let mut b = vec![1.0];
                for &r in &tight {
                    a.push(support.iter().map(|&c| coeff(r, c)).collect());
                    b.push(rhs[r]);
                }
                let Some(p) = solve_dense(a, b) else { continue };
                if p.iter().any(|&v| v < -1e-12) {
                    continue;
                }
                let feasible = (0..n).all(|r| {
                    let lhs: f64 = support.iter().zip(&p).map(|(&c, &v)| coeff(r, c) * v).sum();
                    lhs >= rhs[r] - 1e-12
                });
                if !feasible {
                    continue;
                }
                let value: f64 = support.iter().zip(&p).map(|(&c, &v)| rewards[c] * v).sum();
                best = Some(best.map_or(value, |b: f64| b.max(value)));
            }
        }
    }
    best
}

/// Random explicit family over `n` arms with at most `max_members` members,
/// every arm covered.
pub fn random_family<R: Rng>(rng: &mut R, n: usize, max_members: usize) -> FeasibleFamily {
    let target = rng.random_range(n.min(max_members)..=max_members);
    let mut members: Vec<Vec<u8>> = Vec::new();
    // Cover every arm first with a random partition into small groups.
    let mut arms: Vec<usize> = (0..n).collect();
    arms.shuffle(rng);
    let mut i = 0;
    while i < n {
        let size = rng.random_range(1..=3usize).min(n - i);
        let mut m = vec![0u8; n];
        for &a in &arms[i..i + size] {
            m[a] = 1;
        }
        members.push(m);
        i += size;
    }
    let mut tries = 0;
    while members.len() < target && tries < 1000 {
        tries += 1;
        let m: Vec<u8> = (0..n).map(|_| u8::from(rng.random_bool(0.4))).collect();
        if m.contains(&1) && !members.contains(&m) {
            members.push(m);
        }
    }
    FeasibleFamily::enumerate(&FamilySpec::Explicit { members }, n).expect("valid family")
}

/// Instance on `family` whose targets are a random fraction of the service
/// delivered by a random distribution, so the benchmark is feasible.
pub fn feasible_instance<R: Rng>(rng: &mut R, family: FeasibleFamily) -> Instance {
    let n = family.num_arms();
    let means: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..=1.0)).collect();
    let mut q: Vec<f64> = (0..family.len()).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|v| *v /= total);
    let mut marginal = vec![0.0; n];
    for (s, &qs) in family.members().iter().zip(&q) {
        for &a in s.arms() {
            marginal[a] += qs;
        }
    }
    let scale = rng.random_range(0.2..0.95);
    let targets = (0..n).map(|a| scale * means[a] * marginal[a]).collect();
    Instance::new(means, targets, family).expect("valid instance")
}

/// Random singleton instance with load `sum lambda / mu` equal to `load`.
pub fn singleton_instance<R: Rng>(rng: &mut R, n: usize, load: f64) -> Instance {
    let means: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..=1.0)).collect();
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let raw_load: f64 = raw.iter().zip(&means).map(|(r, m)| r / m).sum();
    let targets = raw.iter().map(|r| r * load / raw_load).collect();
    let family = FeasibleFamily::enumerate(&FamilySpec::Singletons, n).unwrap();
    Instance::new(means, targets, family).unwrap()
}

/// Checks a Farkas certificate against the benchmark program rows
/// (fairness rows first, then the normalization row).
pub fn certificate_proves_infeasible(instance: &Instance, delta: f64, z: &[f64]) -> bool {
    let n = instance.num_arms();
    if z.len() != n + 1 || z[..n].iter().any(|&v| v > 1e-9) {
        return false;
    }
    let columns_ok = instance.family().members().iter().all(|s| {
        let col: f64 = s.arms().iter().map(|&a| z[a] * instance.means()[a]).sum::<f64>() + z[n];
        col >= -1e-9
    });
    let zb: f64 = instance
        .targets()
        .iter()
        .zip(z)
        .map(|(l, zi)| zi * (l + delta))
        .sum::<f64>()
        + z[n];
    columns_ok && zb < -1e-12
}
