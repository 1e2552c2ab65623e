use super::exact::ExactReference;
use crate::error::{Error, Result};
use crate::expalg::FloatPoly;
use crate::series::{Method, SeriesSolution};

/// Uniform cell grid for the discrete error `Σ |φ_n(ς, xᵢ) − f(ς, xᵢ)| h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorGrid {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

impl Default for ErrorGrid {
    fn default() -> Self {
        ErrorGrid {
            lo: 0.0,
            hi: 10.0,
            cells: 1000,
        }
    }
}

impl ErrorGrid {
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.cells as f64
    }

    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.cells).map(move |i| self.lo + (i as f64 + 0.5) * h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub time: f64,
    pub method: Method,
    pub order: usize,
    pub error: f64,
}

/// Discrete midpoint error of the order-`n` partial sum at time `s`.
pub fn grid_error(
    series: &SeriesSolution,
    exact: ExactReference,
    s: f64,
    n: usize,
    grid: &ErrorGrid,
) -> Result<f64> {
    if n > series.order() {
        return Err(Error::Precondition(format!(
            "order {n} requested from a series of order {}",
            series.order()
        )));
    }
    let approx = FloatPoly::from(&series.partial_sum(n));
    let h = grid.step();
    let mut total = 0.0;
    for x in grid.midpoints() {
        total += (approx.eval(s, x) - exact.eval(s, x)?).abs() * h;
    }
    Ok(total)
}

/// Rows for every `(time, order)` pair, times outermost.
pub fn error_table(
    series: &SeriesSolution,
    exact: ExactReference,
    times: &[f64],
    orders: &[usize],
    grid: &ErrorGrid,
) -> Result<Vec<TableRow>> {
    if !exact.has_concentration() {
        return Err(Error::NoExactSolution(exact.label().to_string()));
    }
    let mut rows = Vec::with_capacity(times.len() * orders.len());
    for &time in times {
        for &order in orders {
            rows.push(TableRow {
                time,
                method: series.method,
                order,
                error: grid_error(series, exact, time, order, grid)?,
            });
        }
    }
    Ok(rows)
}
