//! Survival probabilities. A color `c` survives at `u` when no 3-edge `uvw`
//! has both `v` and `w` activated with `c`, and no `G_c` neighbour of `u` is
//! activated with `c`. The activations are independent, so the event only
//! depends on a small weighted constraint structure around `u`: the link.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::{KeyedRng, Phase};

/// Largest link component evaluated exactly by default.
pub const DEFAULT_EXACT_LIMIT: usize = 20;
/// Monte Carlo sample count used above the exact limit.
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QMode {
    /// Exact where components are small enough, sampled otherwise.
    Exact,
    /// The union bound `1 - Σ a_v a_w - Σ a_v`, clamped to `[0, 1]`.
    Bound,
    /// Every component sampled.
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QKind {
    Exact,
    LowerBound,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalEntry {
    pub q: f64,
    pub kind: QKind,
    /// Monte Carlo samples drawn (0 when none).
    pub samples: usize,
    /// Standard error of `q`; zero for exact and bound entries.
    pub std_err: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalOptions {
    pub mode: QMode,
    pub exact_limit: usize,
    pub mc_samples: usize,
}

impl Default for SurvivalOptions {
    fn default() -> Self {
        Self {
            mode: QMode::Exact,
            exact_limit: DEFAULT_EXACT_LIMIT,
            mc_samples: DEFAULT_MC_SAMPLES,
        }
    }
}

/// Local constraint structure for one `(u, c)` cell. Vertex `i` is active
/// independently with probability `probs[i]`; the color is lost when both
/// ends of a pair, or any singleton, are active.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Link {
    pub probs: Vec<f64>,
    pub pairs: Vec<[usize; 2]>,
    pub singletons: Vec<usize>,
}

/// Key for the Monte Carlo stream of a cell.
#[derive(Clone, Copy, Debug)]
pub struct McKey {
    pub rng: KeyedRng,
    pub iteration: u64,
    pub vertex: u64,
    pub color: u64,
}

struct Component {
    // local ids into Link::probs
    members: Vec<usize>,
    // live pairs inside the component
    edges: Vec<[usize; 2]>,
}

impl Link {
    /// `1 - Σ_pairs a_v a_w - Σ_singletons a_v`, clamped to `[0, 1]`.
    pub fn lower_bound(&self) -> f64 {
        let pair_sum: f64 = self
            .pairs
            .iter()
            .map(|&[v, w]| self.probs[v] * self.probs[w])
            .sum();
        let single_sum: f64 = self.singletons.iter().map(|&v| self.probs[v]).sum();
        (1.0 - pair_sum - single_sum).clamp(0.0, 1.0)
    }

    /// Splits into the forced-inactive factor and the pair components left
    /// once singletons and zero-probability vertices are removed.
    fn decompose(&self) -> (f64, Vec<Component>) {
        let k = self.probs.len();
        let mut forced = vec![false; k];
        for &s in &self.singletons {
            forced[s] = true;
        }
        let forced_factor: f64 = (0..k)
            .filter(|&i| forced[i])
            .map(|i| 1.0 - self.probs[i])
            .product();
        let live = |i: usize| !forced[i] && self.probs[i] > 0.0;

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut live_pairs = Vec::new();
        for &[v, w] in &self.pairs {
            debug_assert_ne!(v, w, "pair with a repeated vertex");
            if live(v) && live(w) {
                adj[v].push(w);
                adj[w].push(v);
                live_pairs.push([v, w]);
            }
        }

        let mut comp_of = vec![usize::MAX; k];
        let mut comps: Vec<Component> = Vec::new();
        for start in 0..k {
            if comp_of[start] != usize::MAX || adj[start].is_empty() {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            comp_of[start] = id;
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &y in &adj[x] {
                    if comp_of[y] == usize::MAX {
                        comp_of[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            comps.push(Component {
                members,
                edges: Vec::new(),
            });
        }
        for [v, w] in live_pairs {
            comps[comp_of[v]].edges.push([v, w]);
        }
        (forced_factor, comps)
    }

    /// Exact survival probability, or `None` when some component exceeds
    /// `limit` vertices.
    pub fn exact(&self, limit: usize) -> Option<f64> {
        let (forced, comps) = self.decompose();
        let mut q = forced;
        for c in &comps {
            if c.members.len() > limit.min(MAX_EXACT) {
                return None;
            }
            q *= self.component_exact(c);
        }
        Some(q)
    }

    fn component_exact(&self, c: &Component) -> f64 {
        let pos: HashMap<usize, usize> =
            c.members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut adj = vec![0u128; c.members.len()];
        for &[v, w] in &c.edges {
            let (a, b) = (pos[&v], pos[&w]);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let probs: Vec<f64> = c.members.iter().map(|&m| self.probs[m]).collect();
        let full = if c.members.len() == 128 {
            u128::MAX
        } else {
            (1u128 << c.members.len()) - 1
        };
        let mut memo = HashMap::new();
        independent_prob(full, &adj, &probs, &mut memo)
    }

    /// Survival probability evaluated per the options. `key` seeds the
    /// sampling stream when sampling is needed.
    pub fn evaluate(&self, opts: &SurvivalOptions, key: McKey) -> SurvivalEntry {
        if opts.mode == QMode::Bound {
            return SurvivalEntry {
                q: self.lower_bound(),
                kind: QKind::LowerBound,
                samples: 0,
                std_err: 0.0,
            };
        }
        let (forced, comps) = self.decompose();
        let limit = if opts.mode == QMode::MonteCarlo {
            0
        } else {
            opts.exact_limit.min(MAX_EXACT)
        };
        let mut exact_part = forced;
        let mut sampled: Vec<&Component> = Vec::new();
        for c in &comps {
            if c.members.len() <= limit {
                exact_part *= self.component_exact(c);
            } else {
                sampled.push(c);
            }
        }
        if sampled.is_empty() {
            return SurvivalEntry {
                q: exact_part,
                kind: QKind::Exact,
                samples: 0,
                std_err: 0.0,
            };
        }
        let n = opts.mc_samples.max(1);
        let mut rng = key
            .rng
            .stream(key.iteration, Phase::MonteCarlo, key.vertex, key.color);
        let mut active = vec![false; self.probs.len()];
        let mut hits = 0usize;
        for _ in 0..n {
            let mut ok = true;
            for c in &sampled {
                for &m in &c.members {
                    active[m] = rng.gen::<f64>() < self.probs[m];
                }
                if c.edges.iter().any(|&[v, w]| active[v] && active[w]) {
                    ok = false;
                }
            }
            hits += ok as usize;
        }
        let est = hits as f64 / n as f64;
        SurvivalEntry {
            q: exact_part * est,
            kind: QKind::MonteCarlo,
            samples: n,
            std_err: exact_part * (est * (1.0 - est) / n as f64).sqrt(),
        }
    }
}

/// Hard cap on exact component size (bitmask width).
pub const MAX_EXACT: usize = 128;

/// Probability that the active set within `mask` spans no edge.
fn independent_prob(mask: u128, adj: &[u128], probs: &[f64], memo: &mut HashMap<u128, f64>) -> f64 {
    if mask.count_ones() <= 1 {
        return 1.0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    // connected component of the lowest vertex
    let mut comp = mask & mask.wrapping_neg();
    loop {
        let mut grown = comp;
        let mut bits = comp;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            grown |= adj[i] & mask;
        }
        if grown == comp {
            break;
        }
        comp = grown;
    }
    let result = if comp != mask {
        independent_prob(comp, adj, probs, memo) * independent_prob(mask & !comp, adj, probs, memo)
    } else {
        // condition on the vertex of largest degree
        let mut pivot = 0;
        let mut best = 0;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (adj[i] & mask).count_ones();
            if d > best {
                best = d;
                pivot = i;
            }
        }
        if best == 0 {
            1.0
        } else {
            let a = probs[pivot];
            let nbrs = adj[pivot] & mask;
            let rest = mask & !(1u128 << pivot);
            let inactive = independent_prob(rest, adj, probs, memo);
            let mut nbr_inactive = 1.0;
            let mut bits = nbrs;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                nbr_inactive *= 1.0 - probs[i];
            }
            let active = nbr_inactive * independent_prob(rest & !nbrs, adj, probs, memo);
            (1.0 - a) * inactive + a * active
        }
    };
    memo.insert(mask, result);
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> McKey {
        McKey {
            rng: KeyedRng::new(1),
            iteration: 0,
            vertex: 0,
            color: 0,
        }
    }

    #[test]
    fn single_pair() {
        let p: f64 = 0.3;
        let l = Link {
            probs: vec![p, p],
            pairs: vec![[0, 1]],
            singletons: vec![],
        };
        assert!((l.exact(20).unwrap() - (1.0 - p * p)).abs() < 1e-15);
    }

    #[test]
    fn single_singleton() {
        let l = Link {
            probs: vec![0.4],
            pairs: vec![],
            singletons: vec![0],
        };
        assert!((l.exact(20).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn two_pairs_sharing_a_vertex() {
        // edges uvw and uvx: pairs (v,w), (v,x)
        let (pv, pw, px) = (0.5, 0.3, 0.2);
        let l = Link {
            probs: vec![pv, pw, px],
            pairs: vec![[0, 1], [0, 2]],
            singletons: vec![],
        };
        let want = (1.0 - pv) + pv * (1.0 - pw) * (1.0 - px);
        assert!((l.exact(20).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn singleton_inside_pair() {
        let l = Link {
            probs: vec![0.5, 0.5],
            pairs: vec![[0, 1]],
            singletons: vec![0],
        };
        assert!((l.exact(20).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_link_survives() {
        assert_eq!(Link::default().exact(20), Some(1.0));
        assert_eq!(Link::default().lower_bound(), 1.0);
    }

    #[test]
    fn limit_forces_sampling() {
        let l = Link {
            probs: vec![0.5; 3],
            pairs: vec![[0, 1], [1, 2]],
            singletons: vec![],
        };
        assert!(l.exact(2).is_none());
        let opts = SurvivalOptions {
            mode: QMode::Exact,
            exact_limit: 2,
            mc_samples: 20_000,
        };
        let e = l.evaluate(&opts, key());
        assert_eq!(e.kind, QKind::MonteCarlo);
        let want = l.exact(20).unwrap();
        assert!(
            (e.q - want).abs() < 5.0 * e.std_err + 1e-9,
            "{} vs {want}",
            e.q
        );
    }

    #[test]
    fn bound_mode() {
        let l = Link {
            probs: vec![0.9, 0.9, 0.9],
            pairs: vec![[0, 1]],
            singletons: vec![2],
        };
        let opts = SurvivalOptions {
            mode: QMode::Bound,
            ..Default::default()
        };
        let e = l.evaluate(&opts, key());
        assert_eq!(e.q, 0.0);
        assert_eq!(e.kind, QKind::LowerBound);
    }
}
