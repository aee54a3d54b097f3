//! Enumeration of the linear spaces of a given dimension inside a zero set.

use rayon::prelude::*;

use super::{subspaces_of, VectorSpaceBasis, ZeroSet};
use crate::error::{Error, Result};
use crate::linalg::{self, BinaryMatrix};
use crate::registry::Registry;

pub trait SpaceExtractor: Send + Sync {
    fn name(&self) -> &'static str;
    /// Every `dim`-dimensional subspace contained in `z`, each once, sorted
    /// by canonical basis.
    fn extract(&self, z: &ZeroSet, dim: u32) -> Result<Vec<VectorSpaceBasis>>;
}

pub type ExtractorRegistry = Registry<dyn SpaceExtractor>;

pub fn extractors() -> ExtractorRegistry {
    let mut r = Registry::new("space extractor");
    r.register("auto", Box::new(AutoExtractor) as Box<dyn SpaceExtractor>);
    r.register("affine-rows", Box::new(AffineRowsExtractor));
    r.register("dfs", Box::new(DfsExtractor));
    r
}

/// Uses `affine-rows` when every row of the zero set is affine and the
/// target dimension is `n`, `dfs` otherwise.
pub fn extract_spaces(z: &ZeroSet, dim: u32) -> Result<Vec<VectorSpaceBasis>> {
    AutoExtractor.extract(z, dim)
}

pub struct AutoExtractor;

impl SpaceExtractor for AutoExtractor {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn extract(&self, z: &ZeroSet, dim: u32) -> Result<Vec<VectorSpaceBasis>> {
        if dim == z.n() {
            if let Some(rows) = affine_rows(z) {
                return Ok(AffineRowsExtractor::run(z.n(), &rows));
            }
        }
        DfsExtractor.extract(z, dim)
    }
}

/// Depth-first search over echelon bases with increasing leading bits. The
/// set `T_k` of vectors `x` whose whole coset `x + span(B_k)` lies in `Z` is
/// refined as `T_{k+1} = {x in T_k : x + v in T_k}` after choosing `v`.
/// Works for any set, but the number of partial bases grows quickly with the
/// density of `Z`; intended for `n <= 6` or sparse sets.
pub struct DfsExtractor;

/// Largest `n` for the byte-per-point marks of [`DfsExtractor`].
pub const MAX_DFS_N: u32 = 12;

impl SpaceExtractor for DfsExtractor {
    fn name(&self) -> &'static str {
        "dfs"
    }

    fn extract(&self, z: &ZeroSet, dim: u32) -> Result<Vec<VectorSpaceBasis>> {
        let n = z.n();
        if n > MAX_DFS_N {
            return Err(Error::Capacity {
                operation: "depth-first space extraction",
                n,
                limit: MAX_DFS_N,
                hint: "; affine-rows handles plateaued functions with one-dimensional linear spaces",
            });
        }
        if dim > 2 * n {
            return Ok(Vec::new());
        }
        let ambient = 2 * n;
        if dim == 0 {
            return Ok(vec![VectorSpaceBasis::from_echelon(ambient, Vec::new())]);
        }
        let members: Vec<u64> = z.members().into_iter().filter(|&p| p != 0).collect();
        let mut marks = vec![0u8; 1usize << ambient];
        for &p in &members {
            marks[p as usize] = 1;
        }
        let need = (1usize << dim) - 1;
        if members.len() < need {
            return Ok(Vec::new());
        }
        let mut found: Vec<Vec<u64>> = members
            .par_iter()
            .map_init(
                || marks.clone(),
                |marks, &v| {
                    let mut out = Vec::new();
                    let mut search = Dfs {
                        marks,
                        dim: dim as usize,
                        basis: vec![v],
                        out: &mut out,
                    };
                    let next = search.refine(&members, 0, v);
                    search.descend(&next, 1);
                    out
                },
            )
            .flatten()
            .collect();
        found.sort();
        Ok(found
            .into_iter()
            .map(|b| VectorSpaceBasis::from_echelon(ambient, b))
            .collect())
    }
}

struct Dfs<'a> {
    marks: &'a mut Vec<u8>,
    dim: usize,
    basis: Vec<u64>,
    out: &'a mut Vec<Vec<u64>>,
}

impl Dfs<'_> {
    /// `T_{k+1}` from `T_k` after choosing `v`; marks its members with `k + 2`.
    fn refine(&mut self, list: &[u64], k: usize, v: u64) -> Vec<u64> {
        let start = list.partition_point(|&x| x < (1u64 << (64 - v.leading_zeros())));
        let next: Vec<u64> = list[start..]
            .iter()
            .copied()
            .filter(|&x| self.marks[(x ^ v) as usize] as usize > k)
            .collect();
        for &x in &next {
            self.marks[x as usize] = (k + 2) as u8;
        }
        next
    }

    fn restore(&mut self, list: &[u64], k: usize) {
        for &x in list {
            self.marks[x as usize] = (k + 1) as u8;
        }
    }

    /// `list` is `T_k`, already marked; restores the marks before returning.
    fn descend(&mut self, list: &[u64], k: usize) {
        if k == self.dim {
            self.out.push(self.basis.clone());
            self.restore(list, k - 1);
            return;
        }
        let pivot_mask = self.basis.iter().fold(0u64, |acc, &b| acc | 1 << (63 - b.leading_zeros()));
        let candidates: Vec<u64> = list.iter().copied().filter(|&x| x & pivot_mask == 0).collect();
        if candidates.len() < (1usize << (self.dim - k)) - 1 {
            self.restore(list, k - 1);
            return;
        }
        for &v in &candidates {
            let next = self.refine(list, k, v);
            self.basis.push(v);
            self.descend(&next, k + 1);
            self.basis.pop();
        }
        self.restore(list, k - 1);
    }
}

/// Row structure of a zero set whose rows `Z_b = {a : (a, b) ∈ Z}` are all
/// empty or affine subspaces: `rows[b]` lists `(h, r)` with
/// `Z_b = {a : <a, h> = r for all listed h}`.
pub(crate) type AffineRows = Vec<AffineRow>;
type AffineRow = Option<Vec<(u32, u32)>>;

pub(crate) fn affine_rows(z: &ZeroSet) -> Option<AffineRows> {
    let n = z.n();
    let size = 1u32 << n;
    // outer None: a non-affine row; inner None: an empty row
    let rows: Vec<Option<AffineRow>> = (0..size)
        .into_par_iter()
        .map(|b| {
            let row = z.row(b);
            let Some(&c) = row.first() else {
                return Some(None);
            };
            let shifted: Vec<u64> = row.iter().map(|&a| (a ^ c) as u64).collect();
            let basis = linalg::echelonize(&shifted);
            if 1usize << basis.len() != row.len() {
                return None;
            }
            let perp = BinaryMatrix::from_rows(n as usize, basis).kernel();
            Some(Some(
                perp.into_iter()
                    .map(|h| (h as u32, ((h as u32) & c).count_ones() & 1))
                    .collect(),
            ))
        })
        .collect();
    rows.into_iter().collect()
}

/// Extraction of `n`-dimensional spaces when every row of `Z` is affine,
/// which is the case for plateaued functions whose components all have
/// one-dimensional linear spaces (quadratic AB functions in odd dimension).
///
/// A space `V` of dimension `n` decomposes as `{(phi(b) + k, b) : b ∈ W, k ∈ K}`
/// with `W` its output projection (dimension `t`), `K × {0} = V ∩ (F_2^n × {0})`
/// of dimension `n - t`, and `phi : W -> F_2^n / K` linear. With
/// `Z_b = {a : <a, h> = r_{b,h}}` the containment `V ⊆ Z` is equivalent to
/// `K ⊥ h` for every constraint of every `b ∈ W` and to the affine system
/// `<phi(b), h> = r_{b,h}`. The search runs over all subspaces `W`.
pub struct AffineRowsExtractor;

impl SpaceExtractor for AffineRowsExtractor {
    fn name(&self) -> &'static str {
        "affine-rows"
    }

    fn extract(&self, z: &ZeroSet, dim: u32) -> Result<Vec<VectorSpaceBasis>> {
        if dim != z.n() {
            return Err(Error::domain(format!(
                "affine-rows extracts spaces of dimension n = {} only, not {dim}",
                z.n()
            )));
        }
        if z.n() > 11 {
            return Err(Error::Capacity {
                operation: "affine-rows space extraction",
                n: z.n(),
                limit: 11,
                hint: "",
            });
        }
        let rows = affine_rows(z)
            .ok_or_else(|| Error::domain("some row of the zero set is not an affine subspace"))?;
        Ok(AffineRowsExtractor::run(z.n(), &rows))
    }
}

struct WNode {
    basis: Vec<u32>,
    elements: Vec<u32>,
    /// `(index of b in elements, h, r)`.
    constraints: Vec<(u32, u32, u32)>,
    lambda: [u32; 32],
    lambda_rank: u32,
}

impl AffineRowsExtractor {
    fn run(n: u32, rows: &AffineRows) -> Vec<VectorSpaceBasis> {
        let root = WNode {
            basis: Vec::new(),
            elements: vec![0],
            constraints: Vec::new(),
            lambda: [0; 32],
            lambda_rank: 0,
        };
        let mut found = Vec::new();
        solve_node(n, &root, &mut found);
        let children: Vec<u32> = (1..1u32 << n).collect();
        let mut rest: Vec<Vec<u64>> = children
            .par_iter()
            .flat_map_iter(|&x| {
                let mut out = Vec::new();
                if let Some(child) = extend(&root, x, rows) {
                    walk(n, &child, rows, &mut out);
                }
                out
            })
            .collect();
        found.append(&mut rest);
        found.sort();
        found
            .into_iter()
            .map(|b| VectorSpaceBasis::from_echelon(2 * n, b))
            .collect()
    }
}

fn extend(node: &WNode, x: u32, rows: &AffineRows) -> Option<WNode> {
    let mut child = WNode {
        basis: node.basis.clone(),
        elements: node.elements.clone(),
        constraints: node.constraints.clone(),
        lambda: node.lambda,
        lambda_rank: node.lambda_rank,
    };
    let offset = node.elements.len() as u32;
    for (i, &e) in node.elements.iter().enumerate() {
        let b = e ^ x;
        let constraints = rows[b as usize].as_ref()?;
        for &(h, r) in constraints {
            child.constraints.push((offset + i as u32, h, r));
            insert(&mut child.lambda, &mut child.lambda_rank, h);
        }
        child.elements.push(b);
    }
    child.basis.push(x);
    Some(child)
}

fn insert(basis: &mut [u32; 32], rank: &mut u32, mut v: u32) {
    while v != 0 {
        let top = 31 - v.leading_zeros() as usize;
        if basis[top] == 0 {
            basis[top] = v;
            *rank += 1;
            return;
        }
        v ^= basis[top];
    }
}

fn walk(n: u32, node: &WNode, rows: &AffineRows, out: &mut Vec<Vec<u64>>) {
    solve_node(n, node, out);
    let last = *node.basis.last().expect("non-root");
    let pivot_mask = node.basis.iter().fold(0u32, |acc, &b| acc | 1 << (31 - b.leading_zeros()));
    let start = 1u32 << (32 - last.leading_zeros());
    for x in start..1u32 << n {
        if x & pivot_mask != 0 {
            continue;
        }
        if let Some(child) = extend(node, x, rows) {
            walk(n, &child, rows, out);
        }
    }
}

/// Emits every space whose output projection is `node`'s `W`.
fn solve_node(n: u32, node: &WNode, out: &mut Vec<Vec<u64>>) {
    let t = node.basis.len() as u32;
    if node.lambda_rank > t {
        return;
    }
    let lambda: Vec<u64> = node.lambda.iter().filter(|&&v| v != 0).map(|&v| v as u64).collect();
    let allowed = if lambda.is_empty() {
        (0..n).map(|i| 1u64 << i).collect()
    } else {
        BinaryMatrix::from_rows(n as usize, lambda).kernel()
    };
    for k_basis in subspaces_of(&allowed, (n - t) as usize) {
        let k_pivots = k_basis.iter().fold(0u32, |acc, &v| acc | 1 << (63 - v.leading_zeros()));
        let free: Vec<u32> = (0..n).filter(|&c| (k_pivots >> c) & 1 == 0).collect();
        debug_assert_eq!(free.len() as u32, t);
        let unknowns = (t * t) as usize;
        let equations: Vec<(u128, u32)> = node
            .constraints
            .iter()
            .map(|&(beta, h, r)| {
                let mut row = 0u128;
                for i in 0..t {
                    if (beta >> i) & 1 == 1 {
                        for (j, &c) in free.iter().enumerate() {
                            if (h >> c) & 1 == 1 {
                                row ^= 1u128 << (i * t + j as u32);
                            }
                        }
                    }
                }
                (row, r)
            })
            .collect();
        let Some(solutions) = solve_affine(&equations, unknowns) else {
            continue;
        };
        for sol in solutions {
            let mut vectors: Vec<u64> = k_basis.iter().map(|&k| k << n).collect();
            for (i, &w) in node.basis.iter().enumerate() {
                let mut phi = 0u64;
                for (j, &c) in free.iter().enumerate() {
                    if (sol >> (i * t as usize + j)) & 1 == 1 {
                        phi |= 1 << c;
                    }
                }
                vectors.push(phi << n | w as u64);
            }
            out.push(linalg::echelonize(&vectors));
        }
    }
}

/// All solutions of an affine system over `F_2` with at most 128 unknowns,
/// or `None` if inconsistent.
fn solve_affine(equations: &[(u128, u32)], unknowns: usize) -> Option<Vec<u128>> {
    let mut pivots: Vec<(u128, u32, usize)> = Vec::new();
    for &(row, r) in equations {
        let (mut row, mut r) = (row, r);
        for &(p_row, p_r, p) in &pivots {
            if (row >> p) & 1 == 1 {
                row ^= p_row;
                r ^= p_r;
            }
        }
        if row == 0 {
            if r != 0 {
                return None;
            }
            continue;
        }
        let p = row.trailing_zeros() as usize;
        for entry in pivots.iter_mut() {
            if (entry.0 >> p) & 1 == 1 {
                entry.0 ^= row;
                entry.1 ^= r;
            }
        }
        pivots.push((row, r, p));
    }
    let pivot_mask = pivots.iter().fold(0u128, |acc, &(_, _, p)| acc | 1 << p);
    let free: Vec<usize> = (0..unknowns).filter(|&c| (pivot_mask >> c) & 1 == 0).collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for assignment in 0u64..1 << free.len() {
        let mut x = 0u128;
        for (i, &c) in free.iter().enumerate() {
            x |= ((assignment >> i) & 1) as u128 * (1 << c);
        }
        for &(row, r, p) in &pivots {
            let others = (row & x).count_ones() & 1;
            if r ^ others == 1 {
                x |= 1 << p;
            }
        }
        out.push(x);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec};
    use crate::vbf::Vbf;

    fn cube(m: u32) -> Vbf {
        let f = FieldSpec::with_default_modulus(m).unwrap();
        Vbf::from_univariate(&f, &[(FieldElement::ONE, 3)]).unwrap()
    }

    #[test]
    fn affine_solver() {
        // x0 + x1 = 1, x1 + x2 = 0 over three unknowns: two solutions.
        let eqs = [(0b011u128, 1), (0b110u128, 0)];
        let sols = solve_affine(&eqs, 3).unwrap();
        assert_eq!(sols.len(), 2);
        for s in sols {
            for &(row, r) in &eqs {
                assert_eq!((row & s).count_ones() & 1, r);
            }
        }
        assert!(solve_affine(&[(1, 0), (1, 1)], 1).is_none());
    }

    #[test]
    fn strategies_agree_on_small_ab_functions() {
        for m in [3u32, 5] {
            let z = cube(m).walsh_zeroes().unwrap();
            let a = AffineRowsExtractor.extract(&z, m).unwrap();
            let d = DfsExtractor.extract(&z, m).unwrap();
            assert_eq!(a, d, "m = {m}");
            for v in &a {
                assert!(z.contains_space(v.basis()));
            }
        }
    }

    #[test]
    fn dfs_finds_every_subspace_of_a_full_set() {
        let z = ZeroSet::from_members(2, 0..16).unwrap();
        // Subspaces of F_2^4 by dimension.
        let counts: Vec<usize> = (0..=4).map(|d| DfsExtractor.extract(&z, d).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 15, 35, 15, 1]);
    }

    #[test]
    fn non_affine_rows_fall_back() {
        let z = cube(4).walsh_zeroes().unwrap();
        assert!(affine_rows(&z).is_none());
        assert!(AffineRowsExtractor.extract(&z, 4).is_err());
        let spaces = extract_spaces(&z, 4).unwrap();
        assert_eq!(spaces, DfsExtractor.extract(&z, 4).unwrap());
    }
}
