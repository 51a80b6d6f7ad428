//! Text rendering of a trellis: the apex on top, the input letters at the
//! bottom, every cell centred between the two cells it was computed from.

use std::fmt;

use crate::automaton::{Trellis, TrellisAutomaton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderedTrellis {
    /// Top to bottom: the apex row first, the row of initial states last.
    pub rows: Vec<String>,
    /// The input letters, aligned under the bottom row.
    pub letters: String,
    pub legend: Vec<String>,
}

impl RenderedTrellis {
    /// `descriptions`, if given, holds one line per state in state order.
    pub fn new(
        automaton: &TrellisAutomaton,
        trellis: &Trellis,
        descriptions: Option<&[String]>,
    ) -> Self {
        let width = automaton
            .states()
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1)
            .max(1);
        let glyph = |name: &str| format!("{name:<width$}");
        let n = trellis.len();
        let mut rows = Vec::with_capacity(n);
        for length in (1..=n).rev() {
            let cells: Vec<String> = trellis
                .row(length)
                .iter()
                .map(|&q| glyph(automaton.name(q)))
                .collect();
            let line = format!(
                "{}{}",
                " ".repeat((length - 1) * width),
                cells.join(&" ".repeat(width))
            );
            rows.push(line.trim_end().to_owned());
        }
        let letters: Vec<String> = trellis
            .input()
            .iter()
            .map(|c| glyph(&c.to_string()))
            .collect();
        let letters = letters.join(&" ".repeat(width)).trim_end().to_owned();

        let mut legend = Vec::new();
        for (i, name) in automaton.states().iter().enumerate() {
            let id = crate::automaton::StateId(i);
            let mut line = format!("{}  {}", glyph(name), name);
            if let Some(d) = descriptions.and_then(|d| d.get(i)) {
                line = format!("{}  {}", glyph(name), d);
            }
            if automaton.is_final(id) {
                line.push_str(" (accepting)");
            }
            legend.push(line.trim_end().to_owned());
        }
        let fired = trellis.fired_unspecified().len();
        if fired > 0 {
            legend.push(format!(
                "{fired} cell(s) computed by unspecified transitions"
            ));
        }
        Self {
            rows,
            letters,
            legend,
        }
    }
}

impl fmt::Display for RenderedTrellis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        writeln!(f, "{}", self.letters)?;
        writeln!(f)?;
        writeln!(f, "legend:")?;
        for line in &self.legend {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
