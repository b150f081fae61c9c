use serde::{Deserialize, Serialize};

/// Which presentation of an element a function lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Chart {
    /// `f̂(a, b)`, group variables
    AB,
    /// `f̃(a, β)`, Fourier transform in `b`
    ABETA,
    /// `f̌(α, β)`, Fourier transform in both variables
    ALPHABETA,
}

impl std::fmt::Display for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Chart::AB => "AB",
            Chart::ABETA => "ABETA",
            Chart::ALPHABETA => "ALPHABETA",
        };
        f.write_str(s)
    }
}
