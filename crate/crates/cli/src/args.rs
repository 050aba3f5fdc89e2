use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "qugame", version, about = "Quantum games, protocols and desk-scale algorithms")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random choice. Falls back to the manifest, then
    /// QUGAME_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Run the subcommand and parameters stored in a JSON manifest.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grover search for one marked item among 2^n.
    Grover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: usize,
        /// Override the optimal iteration count.
        #[arg(long)]
        iterations: Option<u64>,
    },
    /// Bernstein–Vazirani: recover a hidden bit string with one query.
    Bv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        secret: usize,
    },
    /// Factor N with simulated order finding.
    Shor {
        #[arg(long = "N", alias = "modulus")]
        modulus: u64,
        #[arg(long, default_value_t = qugame::qalgo::DEFAULT_MAX_ROUNDS)]
        max_rounds: usize,
    },
    /// Break an RSA ciphertext by factoring the modulus.
    Rsa {
        #[arg(long = "N", alias = "modulus")]
        modulus: u64,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        cipher: u64,
    },
    /// Spin flip: Bob, Alice, Bob act on one spin; Alice wins on d.
    Spinflip {
        #[arg(long, default_value = "H")]
        bob1: String,
        #[arg(long, default_value = "X")]
        alice: String,
        #[arg(long, default_value = "H")]
        bob2: String,
        /// Initial spin, u or d.
        #[arg(long, default_value = "u")]
        initial: String,
    },
    /// Guess-a-number, variant I (Grover) or II (one parity query).
    Guess {
        #[arg(long, default_value = "I")]
        variant: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        secret: u64,
    },
    /// One round of the quantum prisoner's dilemma.
    Pd(EwlArgs),
    /// One round of the quantum battle of the sexes.
    Bos {
        #[command(flatten)]
        moves: EwlArgs,
        #[command(flatten)]
        prefs: BosArgs,
    },
    /// Newcomb's game against a quantum predictor.
    Newcomb {
        /// The predictor's choice, 0 or 1.
        #[arg(long, default_value_t = 0)]
        sb: u8,
        /// Alice's flip probability.
        #[arg(long, default_value_t = 0.5)]
        w: f64,
        #[arg(long, value_enum, default_value_t = NewcombArg::Mixture)]
        mode: NewcombArg,
    },
    /// Evolutionary stability on the quantum prisoner's dilemma table.
    Ess {
        #[arg(long, value_delimiter = ',', default_value = "I,X,H,Z")]
        moves: Vec<String>,
        /// Without incumbent and mutant, runs the invasions X←H and H←Z.
        #[arg(long, requires = "mutant")]
        incumbent: Option<String>,
        #[arg(long, requires = "incumbent")]
        mutant: Option<String>,
        /// Mutant share of the population.
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
    },
    /// The three-card game with one quantum query.
    Card {
        /// Up faces of the three cards (0 circle, 1 dot). Random deal if omitted.
        #[arg(long, value_delimiter = ',')]
        faces: Option<Vec<u8>>,
        /// Card Bob draws, 0..2. Random if omitted.
        #[arg(long)]
        draw: Option<usize>,
        /// Print the expected payoffs over all deals instead of one round.
        #[arg(long)]
        expected: bool,
    },
    /// Pseudo-telepathy game Γ_N on a shared GHZ-type state.
    Telepathy {
        /// Input bits, one per player, with an even sum.
        #[arg(long, value_delimiter = ',', conflicts_with = "players")]
        inputs: Option<Vec<u8>>,
        /// Draw admissible inputs at random for this many players.
        #[arg(long, default_value_t = 3)]
        players: usize,
    },
    /// Teleport a qubit cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>.
    Teleport {
        #[command(flatten)]
        qubit: QubitArgs,
        /// Force the Bell outcome b0..b3.
        #[arg(long)]
        branch: Option<usize>,
    },
    /// Share a qubit among Alice, Bob and Gerald.
    SecretQubit {
        #[command(flatten)]
        qubit: QubitArgs,
        /// Force Alice's Bell outcome.
        #[arg(long)]
        bell: Option<usize>,
        /// Force Bob's x outcome (0 for x+, 1 for x−).
        #[arg(long)]
        bob: Option<usize>,
    },
    /// (2,3)-threshold sharing of a qutrit.
    SecretQutrit {
        /// Real amplitudes of the secret, normalized on input.
        #[arg(long, value_delimiter = ',', default_value = "1,1,1", allow_hyphen_values = true)]
        amps: Vec<f64>,
        /// Which two players recover: ab, bg or ga.
        #[arg(long, default_value = "ab")]
        pair: String,
    },
    /// Bob estimates Alice's qubit from z measurements on many copies.
    Estimate {
        #[command(flatten)]
        qubit: QubitArgs,
        #[arg(long, default_value_t = 1000)]
        copies: u64,
        /// Fidelity Bob must reach to win.
        #[arg(long, default_value_t = 0.95)]
        threshold: f64,
    },
    /// Bayes cost of telling pure qubit states apart with one projective measurement.
    Discriminate {
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.5")]
        priors: Vec<f64>,
        /// Polar angles of the candidate states cos(θ/2)|0> + sin(θ/2)|1>.
        #[arg(long, value_delimiter = ',', default_value = "0,1.5707963267948966", allow_hyphen_values = true)]
        thetas: Vec<f64>,
        /// Polar angle of the first measurement vector.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        measure: f64,
    },
    /// Universal 1→2 cloning of a qubit.
    Clone {
        #[command(flatten)]
        qubit: QubitArgs,
    },
    /// Payoff tables with equilibria and Pareto flags.
    Tables {
        #[arg(long, value_enum, default_value_t = TableGame::Pd)]
        game: TableGame,
        #[arg(long, value_delimiter = ',', default_value = "I,X,H,Z")]
        moves: Vec<String>,
        /// Print the underlying classical table instead of the quantum one.
        #[arg(long)]
        classical: bool,
        #[command(flatten)]
        prefs: BosArgs,
    },
    /// Run every golden check and report PASS/FAIL per check.
    Verify,
}

#[derive(Debug, Args)]
pub struct EwlArgs {
    #[arg(long, default_value = "Z")]
    pub alice: String,
    #[arg(long, default_value = "Z")]
    pub bob: String,
}

#[derive(Debug, Args)]
pub struct BosArgs {
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct QubitArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NewcombArg {
    Mixture,
    CoherentShorthand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableGame {
    Pd,
    Bos,
}
