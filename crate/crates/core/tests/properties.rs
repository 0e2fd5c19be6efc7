mod common;

use boardkit_core::builtin::{
    sudoku_definition, sudoku_legal_move, tictactoe_definition, SudokuParams, TicTacToeParams,
};
use boardkit_core::{
    dispatch_event, submit_event, Coord, Event, EventKind, GameDefinition, GameError, GameState,
    PlayerKind, Replica, RunningGame, Semantics, StateKind, TurnPolicy,
};
use proptest::prelude::*;

fn ttt_params() -> impl Strategy<Value = TicTacToeParams> {
    (1usize..=5, 1usize..=5, 2usize..=4, any::<bool>()).prop_flat_map(|(rows, cols, players, random)| {
        (1..=rows.max(cols)).prop_map(move |len| {
            let policy = if random { TurnPolicy::Random } else { TurnPolicy::RoundRobin };
            TicTacToeParams::new(rows, cols, len, players, policy)
        })
    })
}

fn any_definition() -> impl Strategy<Value = GameDefinition> {
    prop_oneof![
        3 => ttt_params().prop_map(|p| tictactoe_definition(&p).unwrap()),
        1 => (1usize..=2).prop_map(|players| {
            let mut p = SudokuParams::empty(4);
            p.players = players;
            sudoku_definition(&p).unwrap()
        }),
    ]
}

/// Raw material for one event; interpreted against the game it is sent to.
#[derive(Debug, Clone)]
struct RawEvent {
    kind: u8,
    actor: u32,
    row: usize,
    col: usize,
    value: u32,
}

fn raw_events(max: usize) -> impl Strategy<Value = Vec<RawEvent>> {
    prop::collection::vec(
        (0u8..20, 0u32..6, 0usize..6, 0usize..6, 0u32..6)
            .prop_map(|(kind, actor, row, col, value)| RawEvent { kind, actor, row, col, value }),
        0..max,
    )
}

/// Mostly well-formed clicks by the current player, with some starts,
/// joins, termination checks and impostors mixed in.
fn to_event(g: &RunningGame, raw: &RawEvent) -> Event {
    let def = g.definition();
    let coord = Coord::new(raw.row % def.rows, raw.col % def.cols);
    match raw.kind {
        0 => Event::game_start(),
        1 => Event::new(EventKind::TerminationCheck, None),
        2 => Event::tile_click(raw.actor, coord, None),
        _ => {
            let actor = g.current_player_id().unwrap_or(1);
            let value = match def.semantics {
                Semantics::Ownership => None,
                Semantics::Symbols => Some(raw.value % (def.value_domain.hi + 1)),
            };
            Event::tile_click(actor, coord, value)
        }
    }
}

fn rank(s: GameState) -> u8 {
    match s.kind() {
        StateKind::NotStarted => 0,
        StateKind::Started => 1,
        StateKind::Terminated => 2,
    }
}

/// Plays the raw events, joining players along the way, and checks the
/// per-step invariants. Returns the games seen and the accepted events.
fn run(def: GameDefinition, seed: u64, raws: &[RawEvent]) -> (Vec<RunningGame>, Vec<Event>) {
    let mut g = RunningGame::create(def, "prop", seed).unwrap();
    let mut seen = vec![g.clone()];
    let mut accepted = Vec::new();
    for raw in raws {
        if raw.kind == 19 || (g.players().len() < g.definition().min_players && raw.kind % 2 == 0) {
            let before = g.clone();
            match g.join(format!("P{}", g.players().len() + 1), PlayerKind::Human) {
                Ok(_) => accepted.push(Event::new(
                    EventKind::PlayerJoin { name: g.players().last().unwrap().name.clone(), kind: PlayerKind::Human },
                    None,
                )),
                Err(GameError::GameFull(_) | GameError::WrongState(_)) => assert_eq!(g, before),
                Err(e) => panic!("join: {e}"),
            }
            seen.push(g.clone());
            continue;
        }
        let ev = to_event(&g, raw);
        match submit_event(&g, &ev) {
            Ok(d) => {
                assert!(!d.fired.is_empty());
                assert!(!d.commands.is_empty());
                let next = d.game;
                assert!(rank(next.state()) >= rank(g.state()), "state went backwards");
                if g.state().is_terminated() {
                    assert_eq!(next.state(), g.state(), "terminated outcome changed");
                }
                g = next;
                accepted.push(ev);
            }
            Err(rej) => {
                assert!(!rej.code.is_empty() && !rej.reason.is_empty());
                // a refused event has no effect: dispatching it again changes nothing
                let d = dispatch_event(&g, &ev);
                if let Ok(d) = d {
                    if d.fired.is_empty() {
                        assert_eq!(d.game, g);
                    }
                }
            }
        }
        seen.push(g.clone());
    }
    (seen, accepted)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn state_is_monotone_and_log_dense(def in any_definition(), seed in any::<u64>(), raws in raw_events(60)) {
        let (seen, _) = run(def, seed, &raws);
        let last = seen.last().unwrap();
        let seqs: Vec<u64> = last.history().iter().flat_map(|h| h.commands.iter().map(|c| c.seq)).collect();
        let expected: Vec<u64> = (1..=last.last_seq()).collect();
        prop_assert_eq!(seqs, expected);
        for h in last.history() {
            prop_assert!(!h.commands.is_empty());
        }
    }

    #[test]
    fn ownership_cells_hold_joined_players(p in ttt_params(), seed in any::<u64>(), raws in raw_events(60)) {
        let def = tictactoe_definition(&p).unwrap();
        let (seen, _) = run(def, seed, &raws);
        for w in seen.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            for c in b.board().coords() {
                let v = b.board().get(c).unwrap();
                prop_assert!(v == 0 || b.player(v).is_some(), "cell {} holds {}", c, v);
                let old = a.board().get(c).unwrap();
                prop_assert!(old == 0 || old == v, "owned cell {} changed", c);
            }
        }
    }

    #[test]
    fn snapshots_round_trip(def in any_definition(), seed in any::<u64>(), raws in raw_events(40)) {
        let (seen, _) = run(def, seed, &raws);
        for g in &seen {
            let text = g.snapshot();
            let back = RunningGame::restore(&text).unwrap();
            prop_assert_eq!(&back, g);
            prop_assert_eq!(back.snapshot(), text);
        }
    }

    #[test]
    fn replica_tracks_game(def in any_definition(), seed in any::<u64>(), raws in raw_events(60)) {
        let (seen, _) = run(def, seed, &raws);
        let first = &seen[0];
        let last = seen.last().unwrap();
        let mut replica = Replica::from_game(first);
        let cmds = last.commands_since(0);
        replica.apply_all(&cmds).unwrap();
        prop_assert_eq!(&replica, &Replica::from_game(last));
        // a replayed command is refused without touching the replica
        if let Some(c) = cmds.last() {
            let before = replica.clone();
            let is_out_of_order = matches!(replica.apply_command(c), Err(GameError::OutOfOrder { .. }));
            prop_assert!(is_out_of_order);
            prop_assert_eq!(replica, before);
        }
    }

    #[test]
    fn replay_is_deterministic(def in any_definition(), seed in any::<u64>(), raws in raw_events(60)) {
        let (seen, accepted) = run(def.clone(), seed, &raws);
        let mut g = RunningGame::create(def, "prop", seed).unwrap();
        for ev in &accepted {
            match &ev.kind {
                EventKind::PlayerJoin { name, kind } => { g.join(name.clone(), *kind).unwrap(); }
                _ => g = dispatch_event(&g, ev).unwrap().game,
            }
        }
        prop_assert_eq!(&g, seen.last().unwrap());
    }

    #[test]
    fn tictactoe_ends_within_board_size(p in ttt_params(), seed in any::<u64>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 25)) {
        let def = tictactoe_definition(&p).unwrap();
        let cells = def.rows * def.cols;
        let mut g = common::started(def, p.players, seed);
        let mut clicks = 0;
        for pick in picks {
            if g.state().is_terminated() {
                break;
            }
            let empty: Vec<Coord> = g.board().coords().filter(|&c| g.board().get(c) == Ok(0)).collect();
            let c = *pick.get(&empty);
            let actor = g.current_player_id().unwrap();
            g = submit_event(&g, &Event::tile_click(actor, c, None)).unwrap().game;
            clicks += 1;
        }
        prop_assert!(g.state().is_terminated());
        prop_assert!(clicks <= cells);
    }

    #[test]
    fn sudoku_accepts_exactly_legal_moves(seed in any::<u64>(), moves in prop::collection::vec((0usize..4, 0usize..4, 0u32..=4), 0..60)) {
        let def = sudoku_definition(&SudokuParams::empty(4)).unwrap();
        let region = def.region;
        let mut g = common::started(def, 1, seed);
        for (r, c, v) in moves {
            if g.state().is_terminated() {
                break;
            }
            let coord = Coord::new(r, c);
            let legal = sudoku_legal_move(g.board(), coord, v, 4, region).unwrap();
            match submit_event(&g, &Event::tile_click(1, coord, Some(v))) {
                Ok(d) => {
                    prop_assert!(legal);
                    prop_assert_eq!(d.game.board().get(coord), Ok(v));
                    g = d.game;
                }
                Err(rej) => {
                    prop_assert!(!legal, "legal move refused: {:?}", rej);
                    prop_assert_eq!(rej.reason.as_str(), "illegal placement");
                }
            }
        }
    }
}
