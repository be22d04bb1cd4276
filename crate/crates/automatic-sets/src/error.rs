use thiserror::Error;

/// Errors from automaton construction and the automaton algebra.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("radix must be at least 2, got {0}")]
    InvalidRadix(u32),
    #[error("track count must be at least 1, got {0}")]
    InvalidTracks(usize),
    #[error("alphabet radix^tracks = {radix}^{tracks} does not fit a symbol id")]
    AlphabetTooLarge { radix: u32, tracks: usize },
    #[error("digit {digit} out of range for radix {radix}")]
    DigitOutOfRange { digit: u32, radix: u32 },
    #[error("symbol tuple has {got} digits, automaton has {expected} tracks")]
    BadTupleWidth { expected: usize, got: usize },
    #[error("symbol id {0} out of range")]
    SymbolOutOfRange(u32),
    #[error("state {state} out of range for {states} states")]
    StateOutOfRange { state: usize, states: usize },
    #[error("operands have different radix or track count")]
    AlphabetMismatch,
}

/// Errors from base-k evaluation and base-k set operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseKError {
    #[error("digit {digit} out of range for radix {radix}")]
    DigitOutOfRange { digit: u32, radix: u32 },
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("base-k sets require a single-track automaton, got {0} tracks")]
    NotSingleTrack(usize),
    #[error("base power transform requires exponent >= 1")]
    ZeroExponent,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Errors from cycle-language normalization.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizationError {
    #[error("cycle language at state {0} is empty or {{epsilon}}; no normalization (sparse-trivial state)")]
    TrivialCycleLanguage(usize),
    #[error("no normalization exponent found up to cap {0}")]
    ExponentCapExceeded(u32),
    #[error("normalization requires a deterministic automaton")]
    NotDeterministic,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    BaseK(#[from] BaseKError),
}
