//! The games and protocols, each producing a replayable [`GameReport`].

mod card;
mod ewl;
mod guess;
mod newcomb;
mod report;
mod secret;
mod spinflip;
mod telepathy;
mod teleport;

pub use card::{
    card_game_classical_payoff, card_game_deal_round, card_game_expected_payoff, card_game_round, card_query_gate, Card,
    CardDeal, CIRCLE, DOT,
};
pub use ewl::{ewl_entangler, ewl_final_state, ewl_play, ewl_report, ewl_table, snap_table};
pub use guess::{guess_number_game, guess_number_game_with, GuessVariant};
pub use newcomb::{newcomb_play, NewcombMode};
pub use report::{
    replay_steps, state_digest, GameReport, Move, MoveSet, Recorder, Step, OPERATOR_SNAPSHOT_DIM, REPLAY_TOL,
    STATE_SNAPSHOT_LEN,
};
pub use secret::{
    qutrit_encode, qutrit_share_leak, qutrit_share_state, secret_correction, secret_share_qubit, secret_share_qutrit,
    SharePair,
};
pub use spinflip::{spin_flip_expected, spin_flip_play, spin_flip_play_from};
pub use telepathy::{
    admissible_inputs, pseudo_telepathy_report, pseudo_telepathy_round, telepathy_coalition_game, telepathy_wins,
    MAX_PLAYERS, MIN_PLAYERS,
};
pub use teleport::{teleport, teleport_correction, teleport_residuals};
