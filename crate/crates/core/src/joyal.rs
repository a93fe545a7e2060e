//! The w-variant of Joyal's bijection between cycle-good labeled automata
//! and 0-shifted branch-good marked w-trees.

use serde::Serialize;

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};
use crate::functional::{is_w_tree, shift_unchecked};
use crate::records::{
    branch_good_witness, branch_records, branch_records_of, cycle_good_witness, cycle_minima, first_collision,
    is_double_hat, DoublyLabeled, DoublyMarked, Labeled, MarkedLabeled, P_TRIPLES, Q_TRIPLES,
};
use crate::thread::Thread;
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Phi,
    Psi,
}

/// One labeled transition `(src, letter) -> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub src: State,
    pub letter: Letter,
    pub target: State,
}

/// The edge replacements performed by one application of `phi` or `psi`.
/// `deleted[p]` and `added[p]` share source and letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewiringPlan {
    pub deleted: Vec<Edge>,
    pub added: Vec<Edge>,
    pub direction: Direction,
}

impl RewiringPlan {
    pub fn len(&self) -> usize {
        self.deleted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deleted.is_empty()
    }

    /// Applies the plan to `a`, checking every deleted edge is present.
    pub fn apply(&self, a: &Automaton) -> Result<Automaton> {
        let mut out = a.clone();
        for (d, n) in self.deleted.iter().zip(&self.added) {
            a.check_state(d.src)?;
            a.check_state(n.target)?;
            if d.letter as usize >= a.alphabet() || a.step(d.src, d.letter) != d.target {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) -> {} is not in the automaton",
                    d.src, d.letter, d.target
                )));
            }
            out.set_edge(n.src, n.letter, n.target);
        }
        Ok(out)
    }

    /// The plan undoing this one.
    pub fn inverse(&self) -> RewiringPlan {
        let direction = match self.direction {
            Direction::Phi => Direction::Psi,
            Direction::Psi => Direction::Phi,
        };
        RewiringPlan { deleted: self.added.clone(), added: self.deleted.clone(), direction }
    }

    pub fn to_json_line(&self) -> String {
        let edges: Vec<_> = self
            .deleted
            .iter()
            .zip(&self.added)
            .map(|(d, n)| serde_json::json!({"src": d.src, "letter": d.letter, "old": d.target, "new": n.target}))
            .collect();
        serde_json::json!({"dir": self.direction, "edges": edges}).to_string()
    }
}

/// Whether `phi`/`psi` verify their domain and the properties of their image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Checks {
    Checked,
    /// The raw map on every input; nothing is asserted.
    Unchecked,
}

fn rewire(deleted: Vec<Edge>, targets: &[State], direction: Direction) -> RewiringPlan {
    let added = deleted.iter().zip(targets).map(|(d, &t)| Edge { target: t, ..*d }).collect();
    RewiringPlan { deleted, added, direction }
}

/// `phi(A, sigma) = (A0, beta_1, sigma)`: every edge closing the cycle of
/// `beta_p` is redirected to `beta_{p+1}`.
pub fn phi(x: &Labeled, w: &Word, checks: Checks) -> Result<(MarkedLabeled, RewiringPlan)> {
    let a = &x.automaton;
    a.check_word(w)?;
    if checks == Checks::Checked {
        if let Some(wit) = cycle_good_witness(a, &x.sigma, w) {
            return Err(Error::Precondition { reason: "input is not cycle-good".into(), witness: Some(Box::new(wit)) });
        }
    }
    let beta = cycle_minima(a, &x.sigma, w);
    let last = w.at(w.len() - 1);
    let deleted: Vec<Edge> = beta.vertices[..beta.count]
        .iter()
        .map(|&b| {
            let alpha = Thread::new(a, b, 0, w).last().0;
            Edge { src: alpha, letter: last, target: b }
        })
        .collect();
    let plan = rewire(deleted, &beta.vertices[1..], Direction::Phi);
    let out = MarkedLabeled { automaton: plan.apply(a)?, mark: beta.vertices[0], sigma: x.sigma.clone() };
    if checks == Checks::Checked {
        check_b_hat(&out, w)?;
        let b = out.branch_records(w);
        if b.vertices != beta.vertices || b.count != beta.count {
            return Err(Error::Postcondition(format!(
                "branch records {:?} differ from cycle minima {:?}",
                b.vertices, beta.vertices
            )));
        }
    }
    Ok((out, plan))
}

fn check_b_hat(y: &MarkedLabeled, w: &Word) -> Result<()> {
    let a = &y.automaton;
    if !is_w_tree(a, w) {
        return Err(Error::NotATree { word: w.to_string() });
    }
    let shift = shift_unchecked(a, y.mark, w);
    if shift != 0 {
        return Err(Error::NotZeroShifted { mark: y.mark, shift });
    }
    if let Some(wit) = branch_good_witness(a, y.mark, &y.sigma, w) {
        return Err(Error::Precondition { reason: "marked tree is not branch-good".into(), witness: Some(Box::new(wit)) });
    }
    Ok(())
}

/// `psi(A, v, sigma) = (A0, sigma)`: the edge entering `b_{p+1}` along the
/// branch of `v` (the cycle-closing edge for `p = ell`) is redirected to `b_p`.
pub fn psi(y: &MarkedLabeled, w: &Word, checks: Checks) -> Result<(Labeled, RewiringPlan)> {
    let a = &y.automaton;
    a.check_word(w)?;
    a.check_state(y.mark)?;
    if checks == Checks::Checked {
        check_b_hat(y, w)?;
    }
    let t = Thread::new(a, y.mark, 0, w);
    let b = branch_records_of(&t, &y.sigma);
    let ell = b.count;
    let deleted: Vec<Edge> = (1..=ell)
        .map(|p| {
            // position whose outgoing edge is replaced, and the vertex it enters
            let (pos, head) = if p < ell {
                (b.positions[p] - 1, b.vertices[p])
            } else {
                (t.len() - 1, t.repeated_vertex())
            };
            let (src, c) = t.entries[pos];
            Edge { src, letter: w.at(c), target: head }
        })
        .collect();
    let plan = rewire(deleted, &b.vertices[..ell], Direction::Psi);
    let out = Labeled { automaton: plan.apply(a)?, sigma: y.sigma.clone() };
    if checks == Checks::Checked {
        if let Some(wit) = cycle_good_witness(&out.automaton, &out.sigma, w) {
            return Err(Error::Postcondition(format!("image is not cycle-good: {}", wit.to_json_line())));
        }
        let beta = out.cycle_minima(w);
        if beta.vertices != b.vertices || beta.count != b.count {
            return Err(Error::Postcondition(format!(
                "cycle minima {:?} differ from branch records {:?}",
                beta.vertices, b.vertices
            )));
        }
    }
    Ok((out, plan))
}

/// Which coordinate is un-marked first by `compose_inverse`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Order {
    OneThenTwo,
    TwoThenOne,
}

/// `psi_2 . psi_1` (or `psi_1 . psi_2`) on a doubly marked configuration.
/// Requires membership in the hatted `P` set (resp. `Q` set); the
/// coordinate not being inverted is carried along unchanged.
pub fn compose_inverse(x: &DoublyMarked, order: Order, w1: &Word, w2: &Word) -> Result<DoublyLabeled> {
    let (first, triples) = match order {
        Order::OneThenTwo => (0, &P_TRIPLES),
        Order::TwoThenOne => (1, &Q_TRIPLES),
    };
    let second = 1 - first;
    let words = [w1, w2];
    if !is_double_hat(x, w1, w2) {
        return Err(Error::Precondition {
            reason: "both marks must be 0-shifted in trees of their words".into(),
            witness: None,
        });
    }
    if let Some(wit) = first_collision(x, w1, w2, triples)? {
        return Err(Error::Precondition {
            reason: format!("collision of type {:?}", wit.ihj),
            witness: Some(Box::new(wit)),
        });
    }
    let records_before = branch_records(&x.automaton, x.marks[second], &x.sigmas[second], words[second]);
    let y1 = MarkedLabeled { automaton: x.automaton.clone(), mark: x.marks[first], sigma: x.sigmas[first].clone() };
    let (mid, _) = psi(&y1, words[first], Checks::Checked)?;
    let y2 = MarkedLabeled { automaton: mid.automaton, mark: x.marks[second], sigma: x.sigmas[second].clone() };
    let (out, _) = psi(&y2, words[second], Checks::Checked).map_err(|e| {
        Error::Postcondition(format!("second inverse is not defined on the intermediate configuration: {e}"))
    })?;
    let beta = out.cycle_minima(words[second]);
    if beta.vertices != records_before.vertices || beta.count != records_before.count {
        return Err(Error::Postcondition(format!(
            "coordinate {} records {:?} became cycle minima {:?}",
            second + 1,
            records_before.vertices,
            beta.vertices
        )));
    }
    Ok(DoublyLabeled { automaton: out.automaton, sigmas: x.sigmas.clone() })
}
