//! n-models: frames with monotone valuations, and the forcing relation.
//!
//! A valuation stores one bitmask per node; bit i-1 encodes x_i. Monotone
//! means the set grows upward along the order. Forcing is evaluated per
//! subformula as a truth set over all nodes at once, memoized on shared
//! subtrees, so repeated queries on machine-built formula DAGs stay linear.

use crate::formulas::Formula;
use crate::frames::Frame;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Width cap for valuations; bit i-1 of a `u32` encodes x_i.
pub const WIDTH_CAP: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("valuation not monotone: `{lower}` <= `{upper}` but bits shrink")]
    Monotonicity { lower: String, upper: String },
    #[error("valuation covers {got} nodes, frame has {want}")]
    WrongCoverage { got: usize, want: usize },
    #[error("formula uses x{used}, model has width {width}")]
    VariableOutOfRange { used: u32, width: u32 },
    #[error("width {0} exceeds cap {WIDTH_CAP}")]
    BadWidth(u32),
    #[error("estimated {est} raw labelings exceeds the explosion guard {guard}")]
    ExplosionGuard { est: u128, guard: u128 },
}

/// An n-model: frame plus monotone valuation.
#[derive(Debug, Clone)]
pub struct Model {
    frame: Arc<Frame>,
    nvars: u32,
    val: Vec<u32>,
}

impl Model {
    pub fn build(frame: Arc<Frame>, nvars: u32, val: Vec<u32>) -> Result<Model, ModelError> {
        if nvars > WIDTH_CAP {
            return Err(ModelError::BadWidth(nvars));
        }
        if val.len() != frame.len() {
            return Err(ModelError::WrongCoverage {
                got: val.len(),
                want: frame.len(),
            });
        }
        let mask = width_mask(nvars);
        for w in 0..frame.len() {
            for u in 0..frame.len() {
                if frame.leq(w, u) && val[w] & mask & !(val[u] & mask) != 0 {
                    return Err(ModelError::Monotonicity {
                        lower: frame.name_of(w).to_string(),
                        upper: frame.name_of(u).to_string(),
                    });
                }
            }
        }
        let val = val.into_iter().map(|v| v & mask).collect();
        Ok(Model { frame, nvars, val })
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.frame.root()
    }

    pub fn val(&self, w: usize) -> u32 {
        self.val[w]
    }

    pub fn vals(&self) -> &[u32] {
        &self.val
    }

    /// Truth of x_i at node w.
    pub fn holds_var(&self, w: usize, i: u32) -> bool {
        self.val[w] >> (i - 1) & 1 == 1
    }

    /// Bit-string for a node, leftmost character is x1.
    pub fn bits_of(&self, w: usize) -> String {
        (0..self.nvars)
            .map(|i| if self.val[w] >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Truth set of `f` as a bitmask over nodes (bit w set iff forced at w).
    pub fn truth_set(&self, f: &Arc<Formula>) -> Result<u64, ModelError> {
        let used = f.max_var();
        if used > self.nvars {
            return Err(ModelError::VariableOutOfRange {
                used,
                width: self.nvars,
            });
        }
        let mut memo: HashMap<*const Formula, u64> = HashMap::new();
        Ok(self.truth_set_memo(f, &mut memo))
    }

    fn truth_set_memo(&self, f: &Arc<Formula>, memo: &mut HashMap<*const Formula, u64>) -> u64 {
        if let Some(&hit) = memo.get(&Arc::as_ptr(f)) {
            return hit;
        }
        let n = self.len();
        let all: u64 = if n == 64 { !0 } else { (1 << n) - 1 };
        let out = match f.as_ref() {
            Formula::Bot => 0,
            Formula::Var(i) => {
                let mut m = 0u64;
                for w in 0..n {
                    if self.val[w] >> (i - 1) & 1 == 1 {
                        m |= 1 << w;
                    }
                }
                m
            }
            Formula::And(a, b) => self.truth_set_memo(a, memo) & self.truth_set_memo(b, memo),
            Formula::Or(a, b) => self.truth_set_memo(a, memo) | self.truth_set_memo(b, memo),
            Formula::Imp(a, b) => {
                let ta = self.truth_set_memo(a, memo);
                let tb = self.truth_set_memo(b, memo);
                let bad = ta & !tb;
                let mut m = 0u64;
                for w in 0..n {
                    if self.frame.up_mask(w) & bad == 0 {
                        m |= 1 << w;
                    }
                }
                m & all
            }
        };
        memo.insert(Arc::as_ptr(f), out);
        out
    }

    /// Forcing at a node.
    pub fn forces_at(&self, w: usize, f: &Arc<Formula>) -> Result<bool, ModelError> {
        Ok(self.truth_set(f)? >> w & 1 == 1)
    }

    /// Forcing at the root; `M |= A`.
    pub fn forces(&self, f: &Arc<Formula>) -> Result<bool, ModelError> {
        self.forces_at(self.frame.root(), f)
    }

    /// Restriction to the first `n` variables over the same frame.
    pub fn restrict(&self, n: u32) -> Result<Model, ModelError> {
        if n > self.nvars {
            return Err(ModelError::BadWidth(n));
        }
        let mask = width_mask(n);
        Ok(Model {
            frame: self.frame.clone(),
            nvars: n,
            val: self.val.iter().map(|v| v & mask).collect(),
        })
    }

    /// The submodel generated by `w`, carrying the valuation.
    pub fn generated_submodel(&self, w: usize) -> Model {
        let sub = self.frame.generated_subframe(w);
        let val = sub
            .names()
            .iter()
            .map(|n| self.val[self.frame.node(n).unwrap()])
            .collect();
        Model {
            frame: Arc::new(sub),
            nvars: self.nvars,
            val,
        }
    }

    /// A root revaluation: same model with the root valuation replaced
    /// (monotonicity rechecked). Non-root nodes keep their values, so the
    /// results are the "variants" used by the extension property.
    pub fn with_root_val(&self, bits: u32) -> Result<Model, ModelError> {
        let mut val = self.val.clone();
        val[self.frame.root()] = bits;
        Model::build(self.frame.clone(), self.nvars, val)
    }
}

fn width_mask(n: u32) -> u32 {
    if n == 0 {
        0
    } else {
        (1u32 << n).wrapping_sub(1)
    }
}

/// All monotone valuations of width `n` over `frame`, in lexicographic order
/// of the concatenated node bit-strings with nodes in frame order.
pub fn monotone_valuations(frame: &Frame, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    try_monotone_valuations(frame, n, u128::MAX, &mut out).expect("uncapped");
    out
}

/// Appends monotone valuations, failing once `out` would exceed `cap`.
fn try_monotone_valuations(
    frame: &Frame,
    n: u32,
    cap: u128,
    out: &mut Vec<Vec<u32>>,
) -> Result<(), ModelError> {
    let before = out.len();
    let mut cur = vec![0u32; frame.len()];
    // Nodes are processed maximal-first so each node's value is constrained
    // by the already-fixed strict successors.
    let mut order: Vec<usize> = (0..frame.len()).collect();
    order.sort_by_key(|&w| frame.up_mask(w).count_ones());
    fn rec(
        frame: &Frame,
        order: &[usize],
        at: usize,
        n: u32,
        cap: u128,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<(), ModelError> {
        if at == order.len() {
            if out.len() as u128 >= cap {
                return Err(ModelError::ExplosionGuard {
                    est: out.len() as u128 + 1,
                    guard: cap,
                });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let w = order[at];
        let mut allowed = width_mask(n);
        for u in 0..frame.len() {
            if u != w && frame.leq(w, u) {
                allowed &= cur[u];
            }
        }
        // Enumerate subsets of `allowed` in increasing numeric order.
        let mut sub = 0u32;
        loop {
            cur[w] = sub;
            rec(frame, order, at + 1, n, cap, cur, out)?;
            if sub == allowed {
                break;
            }
            sub = (sub.wrapping_sub(allowed)) & allowed;
        }
        Ok(())
    }
    rec(frame, &order, 0, n, cap, &mut cur, out)?;
    // Deterministic order: lexicographic on the valuation vector in node
    // order (the recursion above fills maximal-first, so re-sort).
    out[before..].sort_unstable();
    Ok(())
}

/// Enumerates models over the given frames. With `irreducible_only`, keeps
/// exactly the models that are fixed points of `reduce`, deduplicated by
/// canonical form. The guard bounds the number of monotone labelings
/// actually enumerated.
pub fn enumerate_models(
    frames: &[Arc<Frame>],
    n: u32,
    irreducible_only: bool,
    guard: u128,
) -> Result<Vec<Model>, ModelError> {
    if n > WIDTH_CAP {
        return Err(ModelError::BadWidth(n));
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut labelings = 0u128;
    for f in frames {
        let mut vals = Vec::new();
        if labelings >= guard {
            return Err(ModelError::ExplosionGuard {
                est: labelings + 1,
                guard,
            });
        }
        try_monotone_valuations(f, n, guard - labelings, &mut vals)?;
        labelings += vals.len() as u128;
        for val in vals {
            let m = Model {
                frame: f.clone(),
                nvars: n,
                val,
            };
            if irreducible_only {
                let (red, _) = crate::morphisms::reduce(&m);
                if red.len() != m.len() {
                    continue;
                }
                if seen.insert(crate::morphisms::canonical_form(&m)) {
                    out.push(m);
                }
            } else {
                out.push(m);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;

    fn chain(k: usize) -> Arc<Frame> {
        let names: Vec<String> = (1..=k).map(|i| format!("n{i}")).collect();
        let covers: Vec<(String, String)> = (1..k)
            .map(|i| (format!("n{i}"), format!("n{}", i + 1)))
            .collect();
        Arc::new(Frame::build(&names, &covers, "n1").unwrap())
    }

    fn f2() -> Arc<Frame> {
        Arc::new(Frame::build(&["r", "a", "b"], &[("r", "a"), ("r", "b")], "r").unwrap())
    }

    #[test]
    fn monotone_ok_and_rejected() {
        let l2 = chain(2);
        assert!(Model::build(l2.clone(), 1, vec![0, 1]).is_ok());
        let err = Model::build(l2, 1, vec![1, 0]).unwrap_err();
        assert!(matches!(err, ModelError::Monotonicity { .. }));
    }

    #[test]
    fn g3_model_valid() {
        let g3 = Arc::new(
            Frame::build(&["r", "a", "b", "t"], &[("r", "a"), ("r", "b"), ("b", "t")], "r")
                .unwrap(),
        );
        // r=00, a=10, b=00, t=11 with leftmost printed symbol = x1 (bit 0).
        let m = Model::build(g3, 2, vec![0b00, 0b01, 0b00, 0b11]).unwrap();
        assert_eq!(m.bits_of(1), "10");
    }

    #[test]
    fn forcing_on_point() {
        let l1 = chain(1);
        let m = Model::build(l1, 1, vec![1]).unwrap();
        assert!(m.forces(&parse_formula("x1").unwrap()).unwrap());
        assert!(!m.forces(&parse_formula("false").unwrap()).unwrap());
    }

    #[test]
    fn ex1_chain_forcing() {
        // Three-chain labeled 00, 01, 11; A = x2 | (x2 -> (x1 | ~x1)).
        let l3 = chain(3);
        let m = Model::build(l3, 2, vec![0b00, 0b10, 0b11]).unwrap();
        assert_eq!(m.bits_of(1), "01");
        let a = parse_formula("x2 | (x2 -> (x1 | ~x1))").unwrap();
        assert!(!m.forces_at(0, &a).unwrap());
        assert!(m.forces_at(1, &a).unwrap());
        assert!(m.forces_at(2, &a).unwrap());
    }

    #[test]
    fn bot_forced_nowhere() {
        let l3 = chain(3);
        let m = Model::build(l3, 1, vec![0, 0, 1]).unwrap();
        let bot = parse_formula("false").unwrap();
        for w in 0..3 {
            assert!(!m.forces_at(w, &bot).unwrap());
        }
    }

    #[test]
    fn restrict_keeps_x1_as_leftmost() {
        let g3 = Arc::new(
            Frame::build(&["r", "a", "b", "t"], &[("r", "a"), ("r", "b"), ("b", "t")], "r")
                .unwrap(),
        );
        // Printed (r=00, a=10, b=00, t=11): a carries x1.
        let m = Model::build(g3, 2, vec![0b00, 0b01, 0b00, 0b11]).unwrap();
        let r = m.restrict(1).unwrap();
        assert_eq!(
            (r.bits_of(0), r.bits_of(1), r.bits_of(2), r.bits_of(3)),
            ("0".into(), "1".into(), "0".into(), "1".into())
        );
        let full = m.restrict(2).unwrap();
        assert_eq!(full.vals(), m.vals());
        let zero = m.restrict(0).unwrap();
        assert!(zero.vals().iter().all(|&v| v == 0));
    }

    #[test]
    fn generated_submodel_matches_forcing() {
        let l3 = chain(3);
        let m = Model::build(l3, 2, vec![0b00, 0b10, 0b11]).unwrap();
        let sub = m.generated_submodel(1);
        assert_eq!(sub.len(), 2);
        assert_eq!(sub.vals(), &[0b10, 0b11]);
        let a = parse_formula("x2 | (x2 -> (x1 | ~x1))").unwrap();
        assert_eq!(sub.forces(&a).unwrap(), m.forces_at(1, &a).unwrap());
    }

    #[test]
    fn enumerate_l1_width1() {
        let l1 = chain(1);
        let ms = enumerate_models(&[l1], 1, false, 1 << 20).unwrap();
        assert_eq!(ms.len(), 2);
    }

    #[test]
    fn enumerate_l2_irreducible() {
        let l2 = chain(2);
        let ms = enumerate_models(&[l2], 1, true, 1 << 20).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].vals(), &[0, 1]);
    }

    #[test]
    fn enumerate_f2_irreducible() {
        // Brute-force oracle: monotone labelings of the fork at width 1,
        // reduced and deduplicated, leave exactly the (0; 0,1) shape.
        let ms = enumerate_models(&[f2()], 1, true, 1 << 20).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].vals(), &[0, 0, 1]);
    }

    #[test]
    fn explosion_guard_fires() {
        let l3 = chain(3);
        let err = enumerate_models(&[l3], 10, false, 4).unwrap_err();
        assert!(matches!(err, ModelError::ExplosionGuard { .. }));
    }
}
