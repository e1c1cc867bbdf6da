//! Text, CSV and JSON rendering for each command.
//!
//! JSON objects are built as `serde_json::Value` maps, so keys come out
//! sorted and re-serializing parsed output reproduces it byte for byte.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

use chipfire::formulas::FireProfile;
use chipfire::numerics::{DigitString, StableConfig};
use chipfire::schizo::{dump_json, BlockReport, DigitDump};
use chipfire::sequences::{emit_bfile, emit_csv, render_json, SequenceWindow};
use chipfire::{Nat, TreeParams};

use crate::{CmdResult, Failure, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
    /// `index value` lines; sequences only.
    Bfile,
}

fn not_a_sequence() -> Failure {
    Failure::Usage("bfile output is only available for `seq`".into())
}

/// Exact JSON integer.
fn num(x: &Nat) -> Value {
    Value::Number(x.to_string().parse().expect("decimal integer"))
}

fn json_line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

/// Right-aligned columns under a header.
fn columns<const C: usize>(head: [&str; C], rows: &[[String; C]]) -> String {
    let mut widths = head.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: [&str; C]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ") + "\n"
    };
    let mut out = line(head);
    for row in rows {
        out.push_str(&line(row.each_ref().map(String::as_str)));
    }
    out
}

fn csv<const C: usize>(head: &str, rows: impl IntoIterator<Item = [String; C]>) -> String {
    let mut out = format!("{head}\n");
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Digits of `N - repunit(n)`, most significant first: layer `i + 1`
/// holds digit `i` plus one.
fn excess_digits(config: &StableConfig) -> DigitString {
    let digits = config.chips.iter().rev().map(|&c| c - 1).collect();
    DigitString::new(config.k.k(), digits).expect("stable counts are at most k")
}

pub fn stable(chips: &Nat, config: &StableConfig, format: Format) -> CmdResult {
    let digits = excess_digits(config);
    let layers = || {
        config
            .chips
            .iter()
            .enumerate()
            .map(|(i, c)| [(i + 1).to_string(), c.to_string()])
    };
    Ok(match format {
        Format::Table => {
            let rows: Vec<_> = layers().collect();
            format!(
                "N = {chips}, k = {}\nheight n = {}\nN - repunit(n) in base {}: {digits}\n{}",
                config.k.k(),
                config.height,
                config.k.k(),
                columns(["layer", "chips"], &rows)
            )
        }
        Format::Csv => csv("layer,chips", layers()),
        Format::Json => json_line(&json!({
            "N": num(chips),
            "k": config.k.k(),
            "height": config.height,
            "digits": digits.to_string(),
            "layers": config.chips,
        })),
        Format::Bfile => return Err(not_a_sequence()),
    })
}

pub fn fires(profile: &FireProfile, format: Format) -> CmdResult {
    let layers = || {
        profile
            .fires
            .iter()
            .enumerate()
            .map(|(i, f)| [(i + 1).to_string(), f.to_string()])
    };
    Ok(match format {
        Format::Table => {
            let rows: Vec<_> = layers().collect();
            format!(
                "N = {}, k = {}, height n = {}\n{}f0 = {}\nF = {}\n",
                profile.chips,
                profile.k.k(),
                profile.height,
                columns(["layer", "fires"], &rows),
                profile.root(),
                profile.total
            )
        }
        Format::Csv => csv("layer,fires", layers()),
        Format::Json => json_line(&json!({
            "N": num(&profile.chips),
            "k": profile.k.k(),
            "height": profile.height,
            "fires": profile.fires.iter().map(num).collect::<Vec<_>>(),
            "f0": num(&profile.root()),
            "F": num(&profile.total),
        })),
        Format::Bfile => return Err(not_a_sequence()),
    })
}

pub fn sequence(window: &SequenceWindow, format: Format, header: bool) -> CmdResult {
    let mut buf = Vec::new();
    match format {
        Format::Table => {
            let rows: Vec<_> = window
                .pairs()
                .map(|(i, v)| [i.to_string(), v.to_string()])
                .collect();
            let title = format!("{} for k = {}\n", window.id.kind, window.id.k.k());
            return Ok(title + &columns(["n", "value"], &rows));
        }
        Format::Csv => emit_csv(window, &mut buf, header)?,
        Format::Json => {
            let mut s = render_json(window);
            s.push('\n');
            return Ok(s);
        }
        Format::Bfile => emit_bfile(window, &mut buf)?,
    }
    Ok(String::from_utf8(buf).expect("ascii output"))
}

pub fn verify(report: &Report, format: Format) -> CmdResult {
    let (lo, hi) = (*report.ks.start(), *report.ks.end());
    Ok(match format {
        Format::Table | Format::Csv => match &report.mismatch {
            None => format!(
                "PASS k={lo}..{hi} N=1..{}: {} cells, node-level runs per cell: {}\n",
                report.n_max, report.cells, report.node_runs
            ),
            Some(m) => format!("MISMATCH {m}\n"),
        },
        Format::Json => {
            let mismatch = report.mismatch.as_ref().map(|m| {
                json!({
                    "N": m.chips,
                    "k": m.k,
                    "layer": m.layer,
                    "check": m.check,
                    "expected": m.expected,
                    "actual": m.actual,
                })
            });
            json_line(&json!({
                "status": if mismatch.is_none() { "pass" } else { "mismatch" },
                "k": [lo, hi],
                "N": report.n_max,
                "cells": report.cells,
                "node_runs_per_cell": report.node_runs,
                "mismatch": mismatch,
            }))
        }
        Format::Bfile => return Err(not_a_sequence()),
    })
}

pub fn schizo(
    n: usize,
    tree: TreeParams,
    value: &Nat,
    dump: &DigitDump,
    report: &BlockReport,
    min_run: usize,
    format: Format,
) -> CmdResult {
    let blocks = || {
        report.blocks.iter().map(|b| {
            [
                b.digit.to_string(),
                b.start.to_string(),
                b.length.to_string(),
            ]
        })
    };
    Ok(match format {
        Format::Table => {
            let mut out = format!(
                "a({n}) = {value} (k = {})\n{} = {dump}\nruns of at least {min_run} equal digits after the point: {}\n",
                tree.k(),
                dump.subject,
                report.blocks.len()
            );
            if !report.blocks.is_empty() {
                let rows: Vec<_> = blocks().collect();
                out.push_str(&columns(["digit", "offset", "length"], &rows));
            }
            out
        }
        Format::Csv => csv("digit,offset,length", blocks()),
        Format::Json => {
            let mut v = dump_json(dump, report);
            let obj = v.as_object_mut().expect("object");
            obj.insert("n".into(), json!(n));
            obj.insert("k".into(), json!(tree.k()));
            obj.insert("a".into(), num(value));
            obj.insert("radix".into(), json!(dump.radix()));
            obj.insert("min_run".into(), json!(min_run));
            json_line(&v)
        }
        Format::Bfile => return Err(not_a_sequence()),
    })
}
