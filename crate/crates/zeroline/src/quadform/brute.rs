//! Brute-force Witt reduction over F_q: isotropy by vector search, hyperbolic
//! splitting by explicit linear algebra.
//!
//! This path shares nothing with the invariant classification in the parent
//! module; it exists as the independent reference route for cross-checks. The
//! only inputs are diagonal entries (nonzero field elements, index encoded).

use crate::field::finite::FqParams;

/// Search for a nonzero isotropic vector of the diagonal form. Vectors with
/// at most three nonzero coordinates suffice: any rank-3 subform over a
/// finite field is isotropic with a witness on its own support, and smaller
/// supports cover the low-rank cases.
pub fn isotropic_vector(fq: &FqParams, entries: &[u64]) -> Option<Vec<u64>> {
    let n = entries.len();
    for size in 1..=3.min(n) {
        for idx in combinations(n, size) {
            if let Some(v) = search_support(fq, entries, &idx) {
                return Some(v);
            }
        }
    }
    None
}

fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Look for an isotropic vector whose nonzero coordinates are exactly `idx`.
/// Scaling lets us fix the first of them to 1.
fn search_support(fq: &FqParams, entries: &[u64], idx: &[usize]) -> Option<Vec<u64>> {
    let size = idx.len();
    let mut coords = vec![1u64; size];
    loop {
        let mut val = 0u64;
        for (k, &i) in idx.iter().enumerate() {
            val = fq.add(val, fq.mul(entries[i], fq.mul(coords[k], coords[k])));
        }
        if val == 0 {
            let mut v = vec![0u64; entries.len()];
            for (k, &i) in idx.iter().enumerate() {
                v[i] = coords[k];
            }
            return Some(v);
        }
        // advance coords[1..] over nonzero field values
        let mut k = size;
        let mut advanced = false;
        while k > 1 {
            k -= 1;
            coords[k] += 1;
            if coords[k] < fq.q {
                advanced = true;
                break;
            }
            coords[k] = 1;
        }
        if !advanced {
            return None;
        }
    }
}

fn bilinear(fq: &FqParams, entries: &[u64], x: &[u64], y: &[u64]) -> u64 {
    let mut acc = 0u64;
    for i in 0..entries.len() {
        acc = fq.add(acc, fq.mul(entries[i], fq.mul(x[i], y[i])));
    }
    acc
}

/// Basis of the joint kernel of w -> B(v, w) and w -> B(u, w), by Gaussian
/// elimination on the two constraint rows.
fn orthogonal_complement(fq: &FqParams, entries: &[u64], v: &[u64], u: &[u64]) -> Vec<Vec<u64>> {
    let n = entries.len();
    let mut mat: Vec<Vec<u64>> = vec![
        (0..n).map(|i| fq.mul(entries[i], v[i])).collect(),
        (0..n).map(|i| fq.mul(entries[i], u[i])).collect(),
    ];
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for col in 0..n {
        let Some(pr) = (r..mat.len()).find(|&i| mat[i][col] != 0) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = fq.inv(mat[r][col]).expect("pivot nonzero");
        for c in 0..n {
            mat[r][c] = fq.mul(mat[r][c], inv);
        }
        for i in 0..mat.len() {
            if i != r && mat[i][col] != 0 {
                let f = mat[i][col];
                for c in 0..n {
                    let sub = fq.mul(f, mat[r][c]);
                    mat[i][c] = fq.sub(mat[i][c], sub);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == mat.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut w = vec![0u64; n];
        w[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            w[pc] = fq.neg(mat[ri][free]);
        }
        basis.push(w);
    }
    basis
}

/// Diagonalize the Gram matrix of the form restricted to the given basis and
/// return the diagonal entries (all nonzero for nondegenerate restrictions).
fn diagonalize(fq: &FqParams, entries: &[u64], basis: Vec<Vec<u64>>) -> Vec<u64> {
    let m = basis.len();
    let mut g = vec![vec![0u64; m]; m];
    for i in 0..m {
        for j in 0..m {
            g[i][j] = bilinear(fq, entries, &basis[i], &basis[j]);
        }
    }
    let mut diag = Vec::new();
    let mut dim = m;
    while dim > 0 {
        let mut piv = (0..dim).find(|&i| g[i][i] != 0);
        if piv.is_none() {
            'outer: for i in 0..dim {
                for j in i + 1..dim {
                    if g[i][j] != 0 {
                        // add row and column j to row and column i; in odd
                        // characteristic this puts 2*g[i][j] != 0 on the
                        // diagonal
                        for c in 0..dim {
                            let add = g[j][c];
                            g[i][c] = fq.add(g[i][c], add);
                        }
                        for r in 0..dim {
                            let add = g[r][j];
                            g[r][i] = fq.add(g[r][i], add);
                        }
                        piv = Some(i);
                        break 'outer;
                    }
                }
            }
        }
        let Some(p) = piv else {
            debug_assert!(g.iter().take(dim).all(|row| row.iter().take(dim).all(|&x| x == 0)));
            break;
        };
        if p != 0 {
            g.swap(0, p);
            for row in g.iter_mut().take(dim) {
                row.swap(0, p);
            }
        }
        let d = g[0][0];
        diag.push(d);
        let dinv = fq.inv(d).expect("pivot nonzero");
        let mut next = vec![vec![0u64; dim - 1]; dim - 1];
        for i in 1..dim {
            let f = fq.mul(g[i][0], dinv);
            for j in 1..dim {
                let sub = fq.mul(f, g[0][j]);
                next[i - 1][j - 1] = fq.sub(g[i][j], sub);
            }
        }
        g = next;
        dim -= 1;
    }
    diag
}

/// Full Witt reduction by repeated isotropy search and hyperbolic splitting.
pub fn witt_reduce(fq: &FqParams, entries: &[u64]) -> Vec<u64> {
    let mut current: Vec<u64> = entries.to_vec();
    loop {
        if current.len() < 2 {
            return current;
        }
        let Some(v) = isotropic_vector(fq, &current) else {
            return current;
        };
        let n = current.len();
        let j = (0..n)
            .find(|&j| fq.mul(current[j], v[j]) != 0)
            .expect("isotropic vector is nonzero");
        let mut u = vec![0u64; n];
        u[j] = 1;
        let comp = orthogonal_complement(fq, &current, &v, &u);
        debug_assert_eq!(comp.len(), n - 2);
        current = diagonalize(fq, &current, comp);
    }
}

/// Least k with the k-fold orthogonal sum reducing to the empty form.
/// Deliberately linear in k: the two-primarity of torsion is a conclusion of
/// the cross-checks, not an assumption of this oracle.
pub fn additive_order(fq: &FqParams, entries: &[u64], cap: u32) -> Option<u64> {
    if witt_reduce(fq, entries).is_empty() {
        return Some(1);
    }
    let mut copies: Vec<u64> = entries.to_vec();
    for k in 2..=cap as u64 {
        copies.extend_from_slice(entries);
        copies = witt_reduce(fq, &copies);
        if copies.is_empty() {
            return Some(k);
        }
    }
    None
}

/// Least e with the e-th tensor power reducing to the empty form, if any.
pub fn nilpotence_exponent(fq: &FqParams, entries: &[u64], cap: u32) -> Option<u32> {
    let mut power = witt_reduce(fq, entries);
    for e in 1..=cap {
        if power.is_empty() {
            return Some(e);
        }
        let mut tensored = Vec::with_capacity(power.len() * entries.len());
        for &a in &power {
            for &b in entries {
                tensored.push(fq.mul(a, b));
            }
        }
        power = witt_reduce(fq, &tensored);
    }
    None
}
