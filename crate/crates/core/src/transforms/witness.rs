//! Antichain sequences as strategies: a sequence without a positive branch
//! is a winning plan for Cut (or Empty), and a Cut strategy unfolds into the
//! sequence of its pieces met with the positions they were played from.

use std::collections::HashSet;

use serde::Serialize;

use super::{aux_move, soundness, RelationRecord, RunRecord, Simulation, StrategyRef, TransformCertificate};
use crate::engine::playout::ask;
use crate::engine::{
    Core, Flags, GameFamily, GameInstance, GameParams, GameState, Move, Role, Start, Strategy, Structure, Transcript,
    Variant, Width,
};
use crate::error::{Error, Result};
use crate::structures::{is_maximal_i_partition, IPartition, Mask, MonotoneFamily};

fn set_cut_game(game: &GameInstance) -> Result<()> {
    let partitions = matches!(game.structure(), Structure::Sets(_) | Structure::Algebra(_));
    if !partitions || game.family().is_banach_mazur() {
        return Err(Error::Precondition("a cut-and-choose game on sets or an algebra is required".into()));
    }
    Ok(())
}

/// Index sequences `(i_0, …)` through `seq` whose meet with the start stays
/// positive to the end. At most `limit` are returned.
fn branches(game: &GameInstance, seq: &[Vec<Mask>], limit: usize) -> Vec<Vec<usize>> {
    fn walk(game: &GameInstance, seq: &[Vec<Mask>], meet: Mask, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let Some(level) = seq.get(path.len()) else {
            out.push(path.clone());
            return;
        };
        for (i, x) in level.iter().enumerate() {
            let next = meet.intersect(*x);
            if game.structure().is_positive(next) {
                path.push(i);
                walk(game, seq, next, path, out, limit);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(game, seq, game.start().mask(), &mut Vec::new(), &mut out, limit);
    out
}

/// All positive branches through `seq`, in canonical order.
pub fn positive_branches(game: &GameInstance, seq: &[Vec<Mask>]) -> Result<Vec<Vec<usize>>> {
    set_cut_game(game)?;
    let limit = game.move_budget();
    let out = branches(game, seq, limit + 1);
    if out.len() > limit {
        return Err(Error::Capacity { what: "positive branches".into(), limit, states_visited: out.len() });
    }
    Ok(out)
}

pub fn has_positive_branch(game: &GameInstance, seq: &[Vec<Mask>]) -> Result<bool> {
    set_cut_game(game)?;
    Ok(!branches(game, seq, 1).is_empty())
}

/// Cut plays `seq[round]` every round.
#[derive(Clone, Debug)]
pub struct CutFromWitness {
    seq: Vec<Vec<Mask>>,
}

/// Checks that every antichain of `seq` is a legal cut of the start (so a
/// non-maximal one is rejected unless the game relaxes maximality).
pub fn witness_to_cut(game: &GameInstance, seq: Vec<Vec<Mask>>) -> Result<CutFromWitness> {
    set_cut_game(game)?;
    if game.flags().cut_current {
        return Err(Error::Precondition("a witness sequence cuts the start; use cut_current = false".into()));
    }
    if seq.len() < game.rounds() {
        return Err(Error::Precondition(format!("{} antichains for {} rounds", seq.len(), game.rounds())));
    }
    let x = game.start().mask();
    for (i, w) in seq.iter().take(game.rounds()).enumerate() {
        let state = GameState { round: i, turn: Role::Cut, core: Core::Set(x), pending: None };
        game.check_move(&state, &Move::Partition(w.clone()))
            .map_err(|e| Error::Precondition(format!("antichain {i} is not a legal cut: {e}")))?;
    }
    Ok(CutFromWitness { seq })
}

impl CutFromWitness {
    pub fn sequence(&self) -> &[Vec<Mask>] {
        &self.seq
    }
}

impl Strategy for CutFromWitness {
    fn name(&self) -> String {
        format!("witness({} antichains)", self.seq.len())
    }

    fn decide(&self, _: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        self.seq
            .get(state.round)
            .map(|w| Move::Partition(w.clone()))
            .ok_or_else(|| Error::strategy(state, "witness sequence exhausted"))
    }
}

/// The antichain sequence unfolded from a Cut strategy, with the two-way
/// comparison between its positive branches and the Choose lines that beat
/// the strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub sequence: Vec<Vec<Mask>>,
    pub positive_branches: Vec<Vec<usize>>,
    /// Pick sequences against which Choose wins.
    pub beating_lines: Vec<Vec<usize>>,
    /// Every positive branch follows a single Choose line, and that line
    /// beats the strategy.
    pub branches_induce_lines: bool,
    /// Every beating line traces a positive branch.
    pub lines_induce_branches: bool,
}

impl WitnessCheck {
    pub fn agrees(&self) -> bool {
        self.branches_induce_lines && self.lines_induce_branches
    }
}

/// Unfolds `sigma`: level `α` holds `p ∧ y` for every Choose line of length
/// `α` with position `p` and every piece `y` that `sigma` plays there.
pub fn cut_strategy_to_witness(game: &GameInstance, sigma: &dyn Strategy) -> Result<WitnessCheck> {
    set_cut_game(game)?;
    if game.variant() == Variant::StrictPrefix {
        return Err(Error::Precondition("branches are read on full-length plays".into()));
    }
    let n = game.rounds();
    // per level: (element, line, pick)
    let mut levels: Vec<Vec<(Mask, Vec<usize>, usize)>> = vec![Vec::new(); n];
    let mut beating = Vec::new();
    let mut stack = vec![(game.initial_state(), Vec::<Move>::new(), Vec::<usize>::new())];
    let mut visited = 0usize;
    while let Some((state, history, line)) = stack.pop() {
        visited += 1;
        if visited > game.move_budget() {
            return Err(Error::Capacity { what: "Choose lines".into(), limit: game.move_budget(), states_visited: visited });
        }
        if let Some(o) = game.status(&state) {
            if o.winner == Role::Choose {
                beating.push(line);
            }
            continue;
        }
        let mv = ask(game, sigma, &history, &state)?;
        let Move::Partition(pieces) = &mv else {
            return Err(Error::strategy(&state, "expected a set cut"));
        };
        let p = state.core.mask();
        for (i, y) in pieces.iter().enumerate() {
            let e = p.intersect(*y);
            if !e.is_empty() {
                levels[state.round].push((e, line.clone(), i));
            }
        }
        let cut_state = game.apply_move(&state, &mv)?;
        for i in (0..pieces.len()).rev() {
            let mut h = history.clone();
            h.push(mv.clone());
            h.push(Move::Pick(i));
            let mut l = line.clone();
            l.push(i);
            stack.push((game.apply_move(&cut_state, &Move::Pick(i))?, h, l));
        }
    }
    beating.sort();
    // one element per distinct mask, remembering every origin
    let mut sequence: Vec<Vec<Mask>> = Vec::with_capacity(n);
    let mut origins: Vec<Vec<Vec<(Vec<usize>, usize)>>> = Vec::with_capacity(n);
    for level in levels {
        let mut masks: Vec<Mask> = level.iter().map(|(e, _, _)| *e).collect();
        masks.sort();
        masks.dedup();
        let mut o = vec![Vec::new(); masks.len()];
        for (e, line, pick) in level {
            let k = masks.binary_search(&e).expect("present");
            o[k].push((line, pick));
        }
        sequence.push(masks);
        origins.push(o);
    }
    let positive = positive_branches(game, &sequence)?;
    let beating_set: HashSet<&Vec<usize>> = beating.iter().collect();
    let branches_induce_lines = positive.iter().all(|branch| {
        let mut line = Vec::new();
        for (alpha, &k) in branch.iter().enumerate() {
            match origins[alpha][k].iter().find(|(l, _)| *l == line) {
                Some((_, pick)) => line.push(*pick),
                None => return false,
            }
        }
        beating_set.contains(&line)
    });
    let positive_set: HashSet<&Vec<usize>> = positive.iter().collect();
    let lines_induce_branches = beating.iter().all(|line| {
        let branch: Option<Vec<usize>> = (0..line.len())
            .map(|alpha| origins[alpha].iter().position(|o| o.iter().any(|(l, p)| l[..] == line[..alpha] && *p == line[alpha])))
            .collect();
        branch.is_some_and(|b| positive_set.contains(&b))
    });
    Ok(WitnessCheck { sequence, positive_branches: positive, beating_lines: beating, branches_induce_lines, lines_induce_branches })
}

fn ideal_family(game: &GameInstance) -> Result<&MonotoneFamily> {
    match game.structure() {
        Structure::Sets(f) if game.family() == GameFamily::BmIdeal => Ok(f),
        _ => Err(Error::Precondition("a Banach–Mazur game on an ideal is required".into())),
    }
}

/// The cut-and-choose game on the same ideal that a witness walk is read in.
fn walk_game(bm: &GameInstance, start: Mask, maximal: bool) -> Result<GameInstance> {
    GameInstance::new(
        bm.structure().clone(),
        GameParams {
            family: GameFamily::GIdeal,
            start: Start::Set(start),
            rounds: bm.rounds(),
            width: Width::Unbounded,
            variant: Variant::Exact,
            flags: Flags { maximal, cut_current: false },
        },
    )
}

/// Empty walks through a witness sequence, each round moving into the first
/// antichain element that meets the current position positively.
#[derive(Clone)]
pub struct EmptyFromWitness {
    bm: GameInstance,
    walk: GameInstance,
    seq: Vec<Vec<Mask>>,
    branchless: bool,
}

pub fn witness_to_empty(bm: &GameInstance, seq: Vec<Vec<Mask>>) -> Result<EmptyFromWitness> {
    let f = ideal_family(bm)?;
    if seq.len() < bm.rounds() {
        return Err(Error::Precondition(format!("{} antichains for {} rounds", seq.len(), bm.rounds())));
    }
    let x = bm.start().mask();
    for (i, w) in seq.iter().enumerate() {
        if w.is_empty() || w.iter().any(|p| !p.is_subset(x) || !f.is_positive(*p)) {
            return Err(Error::Precondition(format!("antichain {i} must hold positive subsets of {x}")));
        }
        if bm.flags().maximal {
            let ip = IPartition::new(f, x, w.clone()).map_err(|e| Error::Precondition(format!("antichain {i}: {e}")))?;
            if !is_maximal_i_partition(f, &ip) {
                return Err(Error::Precondition(format!("antichain {i} is not maximal")));
            }
        }
    }
    let walk = walk_game(bm, x, bm.flags().maximal)?;
    let branchless = !has_positive_branch(&walk, &seq[..bm.rounds()])?;
    Ok(EmptyFromWitness { bm: bm.clone(), walk, seq, branchless })
}

impl EmptyFromWitness {
    pub fn is_branchless(&self) -> bool {
        self.branchless
    }

    fn step(&self, round: usize, y: Mask) -> usize {
        self.seq[round].iter().position(|x| self.bm.structure().is_positive(y.intersect(*x))).unwrap_or(0)
    }
}

impl Strategy for EmptyFromWitness {
    fn name(&self) -> String {
        format!("witness_walk({} antichains)", self.seq.len())
    }

    fn decide(&self, game: &GameInstance, _: &[Move], state: &GameState) -> Result<Move> {
        let y = state.core.mask();
        let x = self.seq[state.round][self.step(state.round, y)];
        if !game.flags().maximal {
            return Ok(Move::Set(x));
        }
        let next = y.intersect(x);
        if !game.structure().is_positive(next) {
            return Err(Error::strategy(state, format!("no antichain element meets {y} positively")));
        }
        Ok(Move::Set(next))
    }
}

impl Simulation for EmptyFromWitness {
    fn output_game(&self) -> &GameInstance {
        &self.bm
    }

    fn owner(&self) -> Role {
        Role::Empty
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.bm, moves)?;
        let mut state = self.bm.initial_state();
        let mut walk = Vec::new();
        for mv in moves {
            if state.turn == Role::Empty {
                walk.push(Move::Partition(self.seq[state.round].clone()));
                walk.push(Move::Pick(self.step(state.round, state.core.mask())));
            }
            state = self.bm.apply_move(&state, mv)?;
        }
        let (input_run, walk_state) = RunRecord::replay(&self.walk, &walk)?;
        let core = state.core.mask();
        let meet = walk_state.core.mask();
        let empty_won = output_run.winner == Role::Empty;
        Ok(TransformCertificate {
            kind: "witness_to_empty".into(),
            input_run,
            output_run,
            relation: RelationRecord {
                kind: "subset".into(),
                statement: format!(
                    "final position {core} ⊆ walk meet {meet}; witness {}",
                    if self.branchless { "branchless, Empty must win" } else { "has a positive branch" }
                ),
                holds: core.is_subset(meet) && (!self.branchless || empty_won),
            },
        })
    }
}

/// Cut strategy for `G_∞(x₀, I, n)` built from an Empty strategy for the
/// strict game `BM(I, n)`, where `x₀` is Empty's opening move.
#[derive(Clone)]
pub struct CutFromEmpty {
    bm: GameInstance,
    g: GameInstance,
    sigma: StrategyRef,
    x0: Mask,
}

pub fn empty_to_cut(bm: &GameInstance, sigma: StrategyRef) -> Result<CutFromEmpty> {
    ideal_family(bm)?;
    if !bm.flags().maximal {
        return Err(Error::Precondition("the Banach–Mazur game must be the strict one".into()));
    }
    let Move::Set(x0) = aux_move(bm, sigma.as_ref(), &[])? else {
        return Err(soundness("Empty did not open with a set"));
    };
    let g = walk_game(bm, x0, true)?;
    Ok(CutFromEmpty { bm: bm.clone(), g, sigma, x0 })
}

/// One round's cut: the pieces, and for each the Nonempty move that made
/// Empty answer with it (`None` for the extension pieces).
type RoundCut = (Vec<Mask>, Vec<Option<Mask>>);

struct EmptyAux {
    bm_moves: Vec<Move>,
    /// The last round answered by a response piece.
    covered: usize,
    forfeit: Option<String>,
}

impl CutFromEmpty {
    pub fn opening(&self) -> Mask {
        self.x0
    }

    /// Greedy I-partition from Empty's responses below the current set,
    /// extended greedily to a maximal I-partition of `x₀`.
    fn round_cut(&self, bm_moves: &[Move]) -> Result<RoundCut> {
        let s = &self.bm.structure();
        let current = self.bm.replay(bm_moves)?.core.mask();
        let mut pieces: Vec<Mask> = Vec::new();
        let mut sources = Vec::new();
        let addable = |pieces: &[Mask], d: Mask| pieces.iter().all(|w| !s.is_positive(w.intersect(d)));
        for z in current.subsets().filter(|z| s.is_positive(*z)) {
            let mut h = bm_moves.to_vec();
            h.push(Move::Set(z));
            let Move::Set(d) = aux_move(&self.bm, self.sigma.as_ref(), &h)? else {
                return Err(soundness("Empty did not answer with a set"));
            };
            if addable(&pieces, d) {
                pieces.push(d);
                sources.push(Some(z));
            }
        }
        for e in self.x0.subsets().filter(|e| s.is_positive(*e)) {
            if addable(&pieces, e) {
                pieces.push(e);
                sources.push(None);
            }
        }
        Ok((pieces, sources))
    }

    fn aux(&self, history: &[Move]) -> Result<EmptyAux> {
        let mut aux = EmptyAux { bm_moves: vec![Move::Set(self.x0)], covered: 0, forfeit: None };
        for (round, (_, pick)) in super::rounds_of(history).into_iter().enumerate() {
            if round == 0 {
                aux.covered = 1;
                continue;
            }
            let (_, sources) = self.round_cut(&aux.bm_moves)?;
            match sources.get(pick).copied().flatten() {
                Some(z) => {
                    aux.bm_moves.push(Move::Set(z));
                    let d = aux_move(&self.bm, self.sigma.as_ref(), &aux.bm_moves)?;
                    aux.bm_moves.push(d);
                    aux.covered = round + 1;
                }
                None => {
                    aux.forfeit = Some(format!("round {round}: Choose took an extension piece"));
                    break;
                }
            }
        }
        Ok(aux)
    }
}

impl Strategy for CutFromEmpty {
    fn name(&self) -> String {
        format!("empty_to_cut({})", self.sigma.name())
    }

    fn decide(&self, _: &GameInstance, history: &[Move], state: &GameState) -> Result<Move> {
        if state.round == 0 {
            return Ok(Move::Partition(vec![self.x0]));
        }
        let aux = self.aux(history)?;
        if aux.forfeit.is_some() {
            return Err(soundness("Cut is still playing after an extension piece was chosen"));
        }
        Ok(Move::Partition(self.round_cut(&aux.bm_moves)?.0))
    }
}

impl Simulation for CutFromEmpty {
    fn output_game(&self) -> &GameInstance {
        &self.g
    }

    fn owner(&self) -> Role {
        Role::Cut
    }

    fn certify(&self, moves: &[Move]) -> Result<TransformCertificate> {
        let output_run = Transcript::from_moves(&self.g, moves)?;
        let aux = self.aux(moves)?;
        let (input_run, bm_state) = RunRecord::replay(&self.bm, &aux.bm_moves)?;
        let g_core = self.g.replay(moves)?.core.mask();
        let (holds, statement) = match &aux.forfeit {
            Some(_) => (!self.g.structure().is_positive(g_core), format!("extension piece chosen; core {g_core}")),
            None => {
                let last = bm_state.core.mask();
                (g_core == last, format!("core {g_core} equals Empty's last move {last} after {} rounds", aux.covered))
            }
        };
        Ok(TransformCertificate {
            kind: "empty_to_cut".into(),
            input_run: input_run.with_note(aux.forfeit),
            output_run,
            relation: RelationRecord { kind: "equal".into(), statement, holds },
        })
    }
}
