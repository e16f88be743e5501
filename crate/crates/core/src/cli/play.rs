//! Interactive play against the solver.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::engine::playout::ask;
use crate::engine::{replay_transcript, GameInstance, GameState, Move, Role, Transcript};
use crate::error::{Error, Result};
use crate::solver::{solve_with, SolveOptions};
use crate::structures::Mask;

use super::{emit, EXIT_OK};

/// Longest move list printed unasked.
const SHOW_MOVES: usize = 12;

pub(super) fn run(
    game: &GameInstance,
    role: Option<Role>,
    replay: Option<&Path>,
    record: Option<&Path>,
    opts: &SolveOptions,
    json: bool,
) -> Result<i32> {
    if let Some(path) = replay {
        let recorded: Transcript = serde_json::from_str(&fs::read_to_string(path)?)?;
        let fresh = replay_transcript(game, &recorded)?;
        emit(json, &fresh, || fresh.render());
        return Ok(EXIT_OK);
    }
    let (first, second) = game.family().roles();
    let me = role.unwrap_or(first);
    if me != first && me != second {
        return Err(Error::Precondition(format!("{me} does not play {}", game.family())));
    }
    let solved = solve_with(game, opts)?;
    let bot = solved.strategy.for_role(me.opponent());
    eprintln!("{}\nyou play {me}; {} has a winning strategy", game.summary(), solved.winner);
    eprintln!("enter a move number, `?` to list moves, or a move such as `{{0,1}} {{2}}`, `1`, `#3`");

    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut history = Vec::new();
    let mut state = game.initial_state();
    while game.status(&state).is_none() {
        let mv = if state.turn == me {
            let moves = game.legal_moves(&state)?;
            eprintln!("{state}");
            if moves.len() <= SHOW_MOVES {
                list(&moves);
            }
            loop {
                eprint!("> ");
                std::io::stderr().flush()?;
                let line = lines.next().ok_or_else(|| Error::Precondition("input ended mid-game".into()))??;
                let line = line.trim();
                if line == "?" {
                    list(&moves);
                    continue;
                }
                match parse_move(line, &state, &moves).and_then(|mv| game.check_move(&state, &mv).map(|_| mv)) {
                    Ok(mv) => break mv,
                    Err(e) => eprintln!("{e}"),
                }
            }
        } else {
            let mv = ask(game, &bot, &history, &state)?;
            eprintln!("{} plays {mv}", me.opponent());
            mv
        };
        state = game.apply_move(&state, &mv)?;
        history.push(mv);
    }
    let transcript = Transcript::from_moves(game, &history)?;
    if let Some(path) = record {
        fs::write(path, transcript.to_json())?;
    }
    emit(json, &transcript, || transcript.render());
    Ok(EXIT_OK)
}

fn list(moves: &[Move]) {
    for (i, mv) in moves.iter().enumerate() {
        eprintln!("  {i:>3}: {mv}");
    }
}

/// A bare number picks a piece when answering a cut and indexes the move
/// list otherwise; `{..}` masks build partitions or set moves; `#k` names a
/// poset element and `[a,b]` an antichain.
fn parse_move(line: &str, state: &GameState, moves: &[Move]) -> Result<Move> {
    let bad = || Error::Parse(format!("cannot read `{line}` as a move"));
    if let Ok(i) = line.parse::<usize>() {
        if state.pending.is_some() {
            return Ok(Move::Pick(i));
        }
        return moves.get(i).cloned().ok_or_else(|| Error::Parse(format!("no move numbered {i}")));
    }
    if let Some(e) = line.strip_prefix('#') {
        return e.trim().parse().map(Move::Element).map_err(|_| bad());
    }
    if let Some(inner) = line.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let elems = inner.split(',').map(|p| p.trim().parse::<usize>()).collect::<std::result::Result<_, _>>();
        return elems.map(Move::Antichain).map_err(|_| bad());
    }
    let masks = line
        .split('}')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| format!("{p}}}").parse::<Mask>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    match (moves.first(), masks.as_slice()) {
        (Some(Move::Set(_)), [m]) => Ok(Move::Set(*m)),
        (Some(Move::Partition(_)), [_, ..]) => Ok(Move::Partition(masks)),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Core;

    fn state(pending: Option<Move>) -> GameState {
        GameState { round: 0, turn: Role::Cut, core: Core::Set(Mask(0b111)), pending }
    }

    #[test]
    fn reads_cuts_picks_and_indices() {
        let moves = vec![Move::Partition(vec![Mask(1), Mask(6)])];
        assert_eq!(parse_move("{0} {1,2}", &state(None), &moves).unwrap(), Move::Partition(vec![Mask(1), Mask(6)]));
        assert_eq!(parse_move("0", &state(None), &moves).unwrap(), moves[0]);
        assert_eq!(parse_move("1", &state(Some(moves[0].clone())), &moves).unwrap(), Move::Pick(1));
        assert_eq!(parse_move("#2", &state(None), &moves).unwrap(), Move::Element(2));
        assert!(parse_move("x", &state(None), &moves).is_err());
    }
}
