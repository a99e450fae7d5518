//! Circulant graphs, Mycielskians and the bow tie product.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::canon::canonical_form;
use crate::graph::{Graph, GraphError, VertexSet, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("circulant order must be between 1 and 64, got {0}")]
    BadOrder(usize),
    #[error("circulant keys must be nonempty and strictly increasing within 1..={max}: {keys:?}")]
    BadKeys { keys: Vec<usize>, max: usize },
    #[error("result would have {0} vertices (limit 64)")]
    TooLarge(usize),
    #[error("Mycielski index must be at least 2, got {0}")]
    BadIndex(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `C_n[k1, ..., kl]`: vertices `0..n`, `i ~ j` iff `i - j ≡ ±k_p (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirculantSpec {
    n: usize,
    keys: Vec<usize>,
}

impl CirculantSpec {
    pub fn new(n: usize, keys: Vec<usize>) -> Result<Self, ConstructionError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(ConstructionError::BadOrder(n));
        }
        let max = n / 2;
        let ok = !keys.is_empty()
            && keys.windows(2).all(|w| w[0] < w[1])
            && keys.iter().all(|&k| (1..=max).contains(&k));
        if !ok {
            return Err(ConstructionError::BadKeys { keys, max });
        }
        Ok(CirculantSpec { n, keys })
    }

    /// Reduces arbitrary offsets to `min(k mod n, n - k mod n)`, dropping
    /// zeros and repeats.
    pub fn from_offsets(n: usize, offsets: &[usize]) -> Result<Self, ConstructionError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(ConstructionError::BadOrder(n));
        }
        let mut keys: Vec<usize> = offsets
            .iter()
            .map(|&k| {
                let r = k % n;
                r.min(n - r)
            })
            .filter(|&k| k != 0)
            .collect();
        keys.sort_unstable();
        keys.dedup();
        Self::new(n, keys)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn keys(&self) -> &[usize] {
        &self.keys
    }
}

impl fmt::Display for CirculantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<String> = self.keys.iter().map(|k| k.to_string()).collect();
        write!(f, "C{}[{}]", self.n, keys.join(","))
    }
}

pub fn circulant(spec: &CirculantSpec) -> Graph {
    let n = spec.n;
    let mut rows = vec![0u64; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for &k in &spec.keys {
            *row |= 1 << ((i + k) % n);
            *row |= 1 << ((i + n - k) % n);
        }
    }
    Graph::from_rows(&rows).expect("circulant rows are symmetric")
}

/// Connected circulants of order `n`, one per isomorphism class. Each class
/// is represented by its lexicographically smallest key list.
pub fn enumerate_circulants(n: usize) -> Result<Vec<CirculantSpec>, ConstructionError> {
    if !(1..=MAX_VERTICES).contains(&n) {
        return Err(ConstructionError::BadOrder(n));
    }
    let half = n / 2;
    let mut specs: Vec<CirculantSpec> = (1u64..1 << half)
        .map(|mask| {
            let keys = (1..=half).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            CirculantSpec { n, keys }
        })
        .collect();
    specs.sort();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for spec in specs {
        let g = circulant(&spec);
        if !g.is_connected() {
            continue;
        }
        if seen.insert(canonical_form(&g)) {
            out.push(spec);
        }
    }
    Ok(out)
}

/// Mycielskian: originals `0..n`, shadows `n..2n` with `N(u_i) = N(v_i)`,
/// apex `2n` adjacent to every shadow.
pub fn mycielskian(g: &Graph) -> Result<Graph, ConstructionError> {
    let n = g.order();
    let size = 2 * n + 1;
    if size > MAX_VERTICES {
        return Err(ConstructionError::TooLarge(size));
    }
    let mut edges = Vec::with_capacity(3 * g.edge_count() + n);
    for (a, b) in g.edges() {
        edges.push((a, b));
        edges.push((n + a, b));
        edges.push((a, n + b));
    }
    for i in 0..n {
        edges.push((n + i, 2 * n));
    }
    Ok(Graph::from_edges(size, &edges)?)
}

/// `M_2 = K_2`, `M_k = mycielskian(M_{k-1})`.
pub fn mycielski_family(k: usize) -> Result<Graph, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::BadIndex(k));
    }
    let mut g = Graph::complete(2)?;
    for _ in 2..k {
        g = mycielskian(&g)?;
    }
    Ok(g)
}

/// Bow tie product: `(i, j)` is vertex `i * |V(h)| + j`, and `(i, j) ~ (i', j')`
/// iff `i ~ i'` in `g` and either `j = j'` or `j ~ j'` in `h`.
pub fn bowtie(g: &Graph, h: &Graph) -> Result<Graph, ConstructionError> {
    let (a, b) = (g.order(), h.order());
    let size = a * b;
    if size > MAX_VERTICES {
        return Err(ConstructionError::TooLarge(size));
    }
    let mut rows = vec![0u64; size];
    for i in 0..a {
        for j in 0..b {
            let targets = h.closed_neighbours(j);
            let mut row = VertexSet::EMPTY;
            for i2 in g.neighbours(i) {
                for j2 in targets {
                    row.insert(i2 * b + j2);
                }
            }
            rows[i * b + j] = row.0;
        }
    }
    Ok(Graph::from_rows(&rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;
    use crate::invariants::chromatic_number;

    fn spec(n: usize, k: &[usize]) -> CirculantSpec {
        CirculantSpec::new(n, k.to_vec()).unwrap()
    }

    #[test]
    fn circulant_basics() {
        assert_eq!(circulant(&spec(5, &[1])), Graph::cycle(5).unwrap());
        assert_eq!(circulant(&spec(5, &[1, 2])), Graph::complete(5).unwrap());
        // the n/2 key gives one chord per vertex
        let c4_2 = circulant(&spec(4, &[2]));
        assert!((0..4).all(|v| c4_2.degree(v) == 1));
        assert_eq!(circulant(&spec(4, &[1, 2])), Graph::complete(4).unwrap());
        assert!(CirculantSpec::new(5, vec![]).is_err());
        assert!(CirculantSpec::new(5, vec![3]).is_err());
        assert!(CirculantSpec::new(5, vec![2, 1]).is_err());
        assert_eq!(spec(13, &[1, 3, 4]).to_string(), "C13[1,3,4]");
        assert_eq!(CirculantSpec::from_offsets(26, &[2, 27, 24, 13]).unwrap().keys(), &[1, 2, 13]);
    }

    #[test]
    fn circulant_enumeration() {
        let four: Vec<_> = enumerate_circulants(4).unwrap().into_iter().map(|s| s.keys).collect();
        assert_eq!(four, vec![vec![1], vec![1, 2]]);
        let five: Vec<_> = enumerate_circulants(5).unwrap().into_iter().map(|s| s.keys).collect();
        assert_eq!(five, vec![vec![1], vec![1, 2]]);
        let thirteen = enumerate_circulants(13).unwrap();
        assert!(thirteen.contains(&spec(13, &[1, 3, 4])));
        assert!(thirteen.contains(&spec(13, &[1, 2, 3, 5])));
    }

    #[test]
    fn mycielski_graphs() {
        let m3 = mycielski_family(3).unwrap();
        assert!(are_isomorphic(&m3, &Graph::cycle(5).unwrap()));
        let m4 = mycielski_family(4).unwrap();
        assert_eq!((m4.order(), m4.edge_count()), (11, 20));
        assert!(m4.is_triangle_free());
        assert_eq!(chromatic_number(&m4).unwrap(), 4);
        assert_eq!(mycielski_family(2).unwrap(), Graph::complete(2).unwrap());
        assert_eq!(mycielski_family(6).unwrap().order(), 47);
        assert!(matches!(mycielski_family(7), Err(ConstructionError::TooLarge(95))));
        assert!(mycielski_family(1).is_err());
    }

    #[test]
    fn bowtie_products() {
        let c3 = Graph::cycle(3).unwrap();
        let k2 = Graph::complete(2).unwrap();
        let a = bowtie(&c3, &k2).unwrap();
        let b = bowtie(&k2, &c3).unwrap();
        assert_eq!(a.order(), 6);
        assert_eq!(a.edge_count(), 12);
        assert_eq!(b.edge_count(), 9);
        assert!(!are_isomorphic(&a, &b));
        let c5 = Graph::cycle(5).unwrap();
        assert!(bowtie(&c5, &k2).unwrap().is_triangle_free());
        assert!(matches!(bowtie(&Graph::complete(9).unwrap(), &c3.disjoint_union(&c3).unwrap().disjoint_union(&c3).unwrap()), Err(ConstructionError::TooLarge(81))));
    }
}
