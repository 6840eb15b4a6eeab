//! CSV files and the text summary. Floats are written in shortest round-trip
//! form so repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::Output;
use super::pipeline::{Comparison, RunReport};
use crate::error::{Error, Result};

pub const POTENTIAL_FILE: &str = "potential.csv";
pub const SPECTRUM_FILE: &str = "spectrum.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

pub fn state_file(index: usize) -> String {
    format!("state_{index}.csv")
}

pub fn potential_csv(r: &RunReport) -> String {
    let mut s = String::from("x,re_v0,re_v1,im_v1\n");
    let v0 = r.partner.v0.values();
    let v1 = r.partner.v1.values();
    for i in 0..r.grid.len() {
        let _ = writeln!(s, "{},{},{},{}", r.grid.x(i), v0[i].re, v1[i].re, v1[i].im);
    }
    s
}

/// Bound eigenvalues of `H1`.
pub fn spectrum_csv(r: &RunReport) -> String {
    let mut s = String::from("index,re_E,im_E,residual\n");
    for (k, l) in r.bound.iter().enumerate() {
        let _ = writeln!(s, "{k},{},{},{}", l.energy.re, l.energy.im, l.residual);
    }
    s
}

pub fn state_csv(r: &RunReport, k: usize) -> String {
    let psi = &r.states[k].psi;
    let mut s = String::from("x,re_psi,im_psi,abs_psi\n");
    for (i, v) in psi.values().iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{}", r.grid.x(i), v.re, v.im, v.norm());
    }
    s
}

pub fn diagnostics_csv(r: &RunReport) -> String {
    let mut s = String::from("check,value,tolerance,pass\n");
    for c in &r.checks {
        let _ = writeln!(s, "{},{},{},{}", c.name, c.value, c.tolerance, c.passed());
    }
    s
}

pub fn summary(r: &RunReport) -> String {
    let mut s = String::new();
    let p = &r.params;
    let _ = writeln!(s, "model: {:?}", r.config.model);
    if let Some(note) = &r.config.note {
        let _ = writeln!(s, "note: {note}");
    }
    let _ = writeln!(
        s,
        "grid: [{}, {}], n = {}",
        r.grid.x_min(),
        r.grid.x_max(),
        r.grid.len()
    );
    let _ = writeln!(s, "epsilon = {}, lambda = {}, w0 = {}", r.config.epsilon, p.lambda, r.w0);
    let _ = writeln!(
        s,
        "a = {}, b = {}{}, c = {}",
        p.a,
        p.b,
        if r.b_derived { " (derived from b^2 - 4ac = -4 lambda^2 / w0^2)" } else { " (given)" },
        p.c
    );
    let _ = writeln!(s, "\nchecks:");
    for c in &r.checks {
        let op = match c.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        let _ = writeln!(
            s,
            "  {:<4} {:<26} {:.3e} {op} {:.0e}",
            if c.passed() { "ok" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        );
    }
    let _ = writeln!(s, "\nspectrum of H1 below {:.6} ({} bound):", r.continuum, r.bound.len());
    for (k, l) in r.bound.iter().enumerate() {
        let _ = writeln!(s, "  E{k} = {:.10} {:+.3e}i  residual {:.1e}", l.energy.re, l.energy.im, l.residual);
    }
    let h0: Vec<String> = r.h0_levels.iter().map(|e| format!("{e:.10}")).collect();
    let _ = writeln!(s, "H0 bound levels: [{}]", h0.join(", "));
    let _ = writeln!(
        s,
        "full spectrum: {} eigenvalues, max |Im E| = {:.3e}, solver {:?}",
        r.spectrum.eigenvalues.len(),
        r.spectrum.max_imag,
        r.spectrum.path
    );
    if let Some(why) = &r.missing_note {
        let _ = writeln!(s, "missing state not normalizable on this grid: {why}");
    }
    let _ = writeln!(
        s,
        "\nzero area: integral = {:.3e}, boundary form = {:.3e}",
        r.zero_area.integral, r.zero_area.boundary_form
    );
    let _ = writeln!(
        s,
        "PT symmetry: {} (best centre x0 = {:.6}, deviation {:.3e})",
        if r.symmetry.is_pt_symmetric { "symmetric" } else { "not symmetric" },
        r.symmetry.best_shift,
        r.symmetry.deviation
    );
    for (n, il) in &r.interlacing {
        let alt = match il.alternates {
            Some(true) => "alternate",
            Some(false) => "do not alternate",
            None => "Im part has no zeros",
        };
        let _ = writeln!(
            s,
            "state {n}: {} Re zeros, {} Im zeros, {alt}",
            il.re_zeros.len(),
            il.im_zeros.len()
        );
    }
    let failed = r.failed();
    if failed.is_empty() {
        let _ = writeln!(s, "\nall checks passed");
    } else {
        let names: Vec<&str> = failed.iter().map(|c| c.name.as_str()).collect();
        let _ = writeln!(s, "\nfailed checks: {}", names.join(", "));
    }
    s
}

fn write(dir: &Path, name: &str, body: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    written.push(path);
    Ok(())
}

/// Writes the requested outputs plus `summary.txt` into `dir`.
pub fn write_outputs(r: &RunReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    if r.config.wants(Output::Potential) {
        write(dir, POTENTIAL_FILE, &potential_csv(r), &mut written)?;
    }
    if r.config.wants(Output::Spectrum) {
        write(dir, SPECTRUM_FILE, &spectrum_csv(r), &mut written)?;
    }
    if r.config.wants(Output::States) {
        for k in 0..r.states.len() {
            write(dir, &state_file(r.states[k].index), &state_csv(r, k), &mut written)?;
        }
    }
    if r.config.wants(Output::Diagnostics) {
        write(dir, DIAGNOSTICS_FILE, &diagnostics_csv(r), &mut written)?;
    }
    write(dir, SUMMARY_FILE, &summary(r), &mut written)?;
    Ok(written)
}
