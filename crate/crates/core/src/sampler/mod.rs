//! Uniform random generation by walking through shapes with exact
//! transition weights.
//!
//! In plain mode the sampler builds a partition walk of length `2N`; from
//! shape `λ` after `i` steps, the next shape `λ'` is chosen with
//! probability `ω[λ'][2N-i-1] / ω[λ][2N-i]` (completions after the step over
//! completions before it). The product over a walk telescopes to
//! `1 / ω[∅][2N]`.
//!
//! In regular mode it builds a loop-free braid walk of length `L = 2(N-1)`
//! with loop-free counts `σ*` in the same role, decodes the braid and
//! shifts it back to a 2-regular partition of `[N]`.

mod draw;
mod rng;

pub use rng::{uniform_below, BitStream};

use std::sync::mpsc::sync_channel;
use std::sync::Arc as Shared;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use smallvec::SmallVec;

use crate::bijection::{decode_braid, decode_partition, theta_inv};
use crate::count::Tables;
use crate::diagram::Partition;
use crate::error::{param, Error, Result};
use crate::tableau::{apply_step, legal_steps_for, Parity, Rows, Shape, Step, Walk, WalkKind};
use draw::{draw_index, Terms};

/// Which objects a session generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `k`-noncrossing partitions.
    Plain,
    /// 2-regular `k`-noncrossing partitions.
    Regular,
}

/// One candidate next step with its number of completions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub step: Step,
    pub shape: Shape,
    pub weight: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionWeights {
    pub candidates: Vec<Candidate>,
    pub total: BigUint,
}

impl TransitionWeights {
    pub fn weight_sum(&self) -> BigUint {
        self.candidates.iter().map(|c| &c.weight).sum()
    }
}

/// Shared tables plus one random stream.
#[derive(Clone, Debug)]
pub struct SamplerSession {
    tables: Shared<Tables>,
    n: usize,
    rng: BitStream,
}

impl SamplerSession {
    /// Builds tables for `(k, n, mode)` and seeds the stream.
    pub fn build(k: usize, n: usize, mode: Mode, seed: u64) -> Result<Self> {
        let tables = Tables::build(k, n, mode == Mode::Regular)?;
        Ok(SamplerSession {
            tables: Shared::new(tables),
            n,
            rng: BitStream::new(seed),
        })
    }

    /// Session over existing tables, serving the vertex count they were
    /// built for.
    pub fn new(tables: Shared<Tables>, seed: u64) -> Self {
        Self::with_stream(tables, BitStream::new(seed))
    }

    pub fn with_stream(tables: Shared<Tables>, rng: BitStream) -> Self {
        let n = tables.n();
        SamplerSession { tables, n, rng }
    }

    pub fn k(&self) -> usize {
        self.tables.k()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        if self.tables.is_regular() {
            Mode::Regular
        } else {
            Mode::Plain
        }
    }

    pub fn tables(&self) -> &Shared<Tables> {
        &self.tables
    }

    /// Length of the walks this session draws.
    pub fn walk_len(&self) -> usize {
        match self.mode() {
            Mode::Plain => 2 * self.n,
            Mode::Regular => 2 * self.n.saturating_sub(1),
        }
    }

    /// Number of objects in the sampled universe.
    pub fn total(&self) -> Result<BigUint> {
        let empty = vec![0u32; self.k() - 1];
        match &*self.tables {
            Tables::Plain(o) => o.value(&empty, 2 * self.n),
            Tables::Regular { sigma, .. } => sigma.value(&empty, self.walk_len()),
        }
    }

    fn require_mode(&self, mode: Mode) -> Result<()> {
        if self.mode() != mode {
            return Err(param("mode", format!("session is in {:?} mode", self.mode())));
        }
        Ok(())
    }

    /// Completions of every legal next step from `shape` after `i` steps of
    /// a partition walk.
    pub fn partition_weights(&self, shape: &Shape, i: usize) -> Result<TransitionWeights> {
        self.require_mode(Mode::Plain)?;
        let Tables::Plain(omega) = &*self.tables else {
            unreachable!()
        };
        let len = 2 * self.n;
        if i >= len {
            return Err(param("i", format!("must be below {len}, got {i}")));
        }
        if shape.k() != self.k() {
            return Err(param("shape", format!("shape {shape} has the wrong k")));
        }
        let rows = shape.padded_rows();
        let adding = WalkKind::Partition.adds_at(Parity::of_position(i + 1));
        let mut candidates = Vec::new();
        for step in legal_steps_for(rows, adding, false) {
            let mut after: Rows = rows.into();
            apply_step(&mut after, step);
            candidates.push(Candidate {
                step,
                weight: omega.value(&after, len - i - 1)?,
                shape: Shape::from_padded(after),
            });
        }
        Ok(TransitionWeights {
            candidates,
            total: omega.value(rows, len - i)?,
        })
    }

    /// Regular-mode weights. At even `i` the candidates are odd (adding)
    /// steps and `pending` must be `None`; at odd `i` they are removing
    /// steps and `pending` is the add just taken. At even `i` the total is
    /// the stored count `σ*[λ][L-i]`; at odd `i` it is the weight the
    /// pending step was drawn with.
    pub fn regular_weights(
        &self,
        shape: &Shape,
        i: usize,
        pending: Option<Step>,
    ) -> Result<TransitionWeights> {
        self.require_mode(Mode::Regular)?;
        let Tables::Regular { sigma, .. } = &*self.tables else {
            unreachable!()
        };
        let len = self.walk_len();
        if i >= len {
            return Err(param("i", format!("must be below {len}, got {i}")));
        }
        if shape.k() != self.k() {
            return Err(param("shape", format!("shape {shape} has the wrong k")));
        }
        let rows = shape.padded_rows();
        let mut candidates = Vec::new();
        if i % 2 == 0 {
            if pending.is_some() {
                return Err(param("pending", "must be absent before an odd step"));
            }
            for alpha in legal_steps_for(rows, true, false) {
                let mut mid: Rows = rows.into();
                apply_step(&mut mid, alpha);
                let mut weight = BigUint::default();
                for t in legal_steps_for(&mid, false, alpha == Step::Add(1)) {
                    let mut after = mid.clone();
                    apply_step(&mut after, t);
                    weight += sigma.value(&after, len - i - 2)?;
                }
                candidates.push(Candidate {
                    step: alpha,
                    weight,
                    shape: Shape::from_padded(mid),
                });
            }
            Ok(TransitionWeights {
                candidates,
                total: sigma.value(rows, len - i)?,
            })
        } else {
            let Some(alpha) = pending else {
                return Err(param("pending", "the odd step just taken is required"));
            };
            for t in legal_steps_for(rows, false, alpha == Step::Add(1)) {
                let mut after: Rows = rows.into();
                apply_step(&mut after, t);
                candidates.push(Candidate {
                    step: t,
                    weight: sigma.value(&after, len - i - 1)?,
                    shape: Shape::from_padded(after),
                });
            }
            let total = candidates.iter().map(|c| &c.weight).sum();
            Ok(TransitionWeights { candidates, total })
        }
    }

    /// Draws one walk.
    pub fn draw_walk(&mut self) -> Result<Walk> {
        let k = self.k();
        let len = self.walk_len();
        let mut rows: Rows = SmallVec::from_elem(0, k - 1);
        let mut steps = Vec::with_capacity(len);
        let mut cands: Vec<Terms<'_>> = Vec::with_capacity(k * k);
        let mut moves: Vec<(Step, Step)> = Vec::with_capacity(k * k);
        let mut after: Rows = rows.clone();
        match &*self.tables {
            Tables::Plain(omega) => {
                for i in 0..len {
                    let adding = i % 2 == 1;
                    cands.clear();
                    let options = legal_steps_for(&rows, adding, false);
                    for &step in &options {
                        after.clone_from(&rows);
                        apply_step(&mut after, step);
                        let mut terms = Terms::new();
                        omega.terms(&after, len - i - 1, &mut terms)?;
                        cands.push(terms);
                    }
                    let j = draw_index(&cands, &mut self.rng)?;
                    apply_step(&mut rows, options[j]);
                    steps.push(options[j]);
                }
                Ok(Walk::new(WalkKind::Partition, k, steps))
            }
            Tables::Regular { sigma, .. } => {
                // one draw per vertex over (add, remove) pairs
                for i in (0..len).step_by(2) {
                    cands.clear();
                    moves.clear();
                    for alpha in legal_steps_for(&rows, true, false) {
                        let mut mid = rows.clone();
                        apply_step(&mut mid, alpha);
                        for t in legal_steps_for(&mid, false, alpha == Step::Add(1)) {
                            after.clone_from(&mid);
                            apply_step(&mut after, t);
                            let mut terms = Terms::new();
                            sigma.terms(&after, len - i - 2, &mut terms)?;
                            cands.push(terms);
                            moves.push((alpha, t));
                        }
                    }
                    let j = draw_index(&cands, &mut self.rng)?;
                    let (alpha, t) = moves[j];
                    apply_step(&mut rows, alpha);
                    apply_step(&mut rows, t);
                    steps.push(alpha);
                    steps.push(t);
                }
                Ok(Walk::new(WalkKind::Braid, k, steps))
            }
        }
    }

    /// Draws one walk and the partition it encodes.
    pub fn draw(&mut self) -> Result<(Walk, Partition)> {
        let walk = self.draw_walk()?;
        let p = self.walk_to_partition(&walk)?;
        Ok((walk, p))
    }

    /// Decodes a walk of this session's mode into its partition.
    pub fn walk_to_partition(&self, walk: &Walk) -> Result<Partition> {
        match self.mode() {
            Mode::Plain => decode_partition(walk),
            Mode::Regular if self.n == 0 => Ok(Partition::singletons(0)),
            Mode::Regular => theta_inv(&decode_braid(walk)?),
        }
    }

    fn check_walk(&self, w: &Walk) -> Result<()> {
        let kind = match self.mode() {
            Mode::Plain => WalkKind::Partition,
            Mode::Regular => WalkKind::Braid,
        };
        if w.kind() != kind || w.k() != self.k() || w.len() != self.walk_len() {
            return Err(param(
                "w",
                format!(
                    "expected a {kind:?} walk of length {} for k = {}",
                    self.walk_len(),
                    self.k()
                ),
            ));
        }
        w.validate_complete()?;
        if self.mode() == Mode::Regular && !w.is_loop_free() {
            return Err(param("w", "regular-mode walks may not contain (+1, -1) pairs"));
        }
        Ok(())
    }

    /// Probability that this session draws `w`, as the product of its
    /// transition ratios.
    pub fn path_probability(&self, w: &Walk) -> Result<BigRational> {
        self.check_walk(w)?;
        let mut prob = BigRational::one();
        let shapes = w.shapes()?;
        let mut pending = None;
        for (i, &step) in w.steps().iter().enumerate() {
            let tw = match self.mode() {
                Mode::Plain => self.partition_weights(&shapes[i], i)?,
                Mode::Regular => self.regular_weights(&shapes[i], i, pending)?,
            };
            let chosen = tw
                .candidates
                .iter()
                .find(|c| c.step == step)
                .ok_or_else(|| Error::Invariant(format!("step {step} is not a candidate")))?;
            if tw.total.bits() == 0 {
                return Err(Error::Invariant(format!("zero total at step {}", i + 1)));
            }
            prob *= BigRational::new(chosen.weight.clone().into(), tw.total.into());
            pending = (i % 2 == 0).then_some(step);
        }
        Ok(prob)
    }
}

/// Draws `count` partitions with `jobs` workers and hands them to `emit` in
/// a fixed order: sample `m` comes from worker `m % jobs` (stream seeded
/// with `seed ^ worker`), as that worker's `(m / jobs)`-th draw. The output
/// depends only on `(tables, seed, count, jobs)`.
pub fn sample_round_robin<F>(
    tables: Shared<Tables>,
    n: usize,
    seed: u64,
    count: u64,
    jobs: usize,
    mut emit: F,
) -> Result<()>
where
    F: FnMut(u64, Partition) -> Result<()>,
{
    let jobs = jobs.max(1);
    let session = |worker: usize| {
        let mut s = SamplerSession::with_stream(tables.clone(), BitStream::for_worker(seed, worker as u64));
        s.n = n;
        s
    };
    if jobs == 1 {
        let mut s = session(0);
        for m in 0..count {
            emit(m, s.draw()?.1)?;
        }
        return Ok(());
    }
    std::thread::scope(|scope| {
        let mut receivers = Vec::with_capacity(jobs);
        for worker in 0..jobs {
            let (tx, rx) = sync_channel::<Result<Partition>>(64);
            receivers.push(rx);
            let mut s = session(worker);
            let quota = count / jobs as u64 + u64::from((worker as u64) < count % jobs as u64);
            scope.spawn(move || {
                for _ in 0..quota {
                    let out = s.draw().map(|(_, p)| p);
                    let failed = out.is_err();
                    if tx.send(out).is_err() || failed {
                        return;
                    }
                }
            });
        }
        for m in 0..count {
            let got = receivers[(m % jobs as u64) as usize]
                .recv()
                .map_err(|_| Error::Invariant("sampling worker stopped early".into()))?;
            emit(m, got?)?;
        }
        Ok(())
    })
}
