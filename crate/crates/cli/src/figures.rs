//! Built-in sweep recipes for the standard figure set.

use crate::config::{ConfigError, SweepConfig};

const RECIPES: [&str; 4] = [
    include_str!("../recipes/fig1.conf"),
    include_str!("../recipes/fig2.conf"),
    include_str!("../recipes/fig3.conf"),
    include_str!("../recipes/fig4.conf"),
];

/// Knobs a figure run may override.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FigureOptions {
    pub samples: Option<usize>,
    /// γ₀/K for figure 4. Defaults to 1.
    pub gamma0_over_k: Option<f64>,
}

pub fn recipe_text(figure: u8) -> Option<&'static str> {
    RECIPES.get(usize::from(figure).checked_sub(1)?).copied()
}

pub fn recipe(figure: u8, options: FigureOptions) -> Result<SweepConfig, ConfigError> {
    let text = recipe_text(figure).ok_or_else(|| ConfigError {
        line: None,
        key: None,
        message: format!("no figure {figure}; expected 1, 2, 3 or 4"),
    })?;
    let mut sweep = SweepConfig::from_text(text)?;
    if let Some(n) = options.samples {
        sweep.set("horizon.samples", n.to_string())?;
    }
    if let Some(ratio) = options.gamma0_over_k {
        if figure != 4 {
            return Err(ConfigError {
                line: None,
                key: Some("gamma0-over-k".into()),
                message: "only figure 4 has a gamma0/K knob".into(),
            });
        }
        // K = 1 in the recipe, so γ₀ itself is the ratio
        sweep.set("bath.gamma0", format!("{ratio}"))?;
    }
    Ok(sweep)
}
