//! Monte Carlo experiment driver.
//!
//! Drop `i` of a run draws everything from the substreams of
//! `(rng_seed, i)`, so the same drop index yields the same large-scale
//! parameters, UE height and late-cluster set in every configuration. Drops
//! may run on a rayon pool; results are collected in drop order before
//! anything is written.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use crate::builder::Cir;
use crate::combiner::{apply_geometry, realize_configuration, statistical_cir, ConfigId};
use crate::error::{Error, Result};
use crate::largescale::draw_lsps;
use crate::metrics::{band_powers, ecdf_steps, kec, overall_k, quantile, KecValue};
use crate::rng::DropStreams;
use crate::scenario::{pathloss_db, GeometryLink, SimConfig, SCHEMA_VERSION};
use crate::toa::estimate_toa;
use crate::waveform::{bandlimited_cir, bandlimited_cir_noisy, BandlimitedCir};

pub const DEFAULT_KEC_BINS: [f64; 4] = [0.0, 5.0, 10.0, 15.0];

/// One drop of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub drop_index: u64,
    pub config_id: ConfigId,
    pub kec: KecValue,
    pub overall_k_db: f64,
    /// Seconds; `None` when the waveform was not evaluated or nothing was detected.
    pub toa_error: Option<f64>,
    pub rsrp_db: Option<f64>,
    pub rsrpp_db: Option<f64>,
    pub ue_height_m: f64,
    pub seed: u64,
}

impl RunRecord {
    pub const CSV_HEADER: &'static str =
        "drop_index,config_id,kec_dB,overall_k_dB,toa_error_ns,rsrp_dB,rsrpp_dB,ue_height_m,seed";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>, none: &str| v.map_or(none.to_string(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.drop_index,
            self.config_id,
            self.kec,
            fmt_db(self.overall_k_db),
            opt(self.toa_error.map(|e| e * 1e9), "NoDetection"),
            opt(self.rsrp_db, ""),
            opt(self.rsrpp_db, ""),
            self.ue_height_m,
            self.seed
        )
    }
}

fn fmt_db(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        v.to_string()
    }
}

/// Drop-level execution options.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads: `None` uses rayon's default, `Some(1)` runs serially.
    pub threads: Option<usize>,
    /// Whether to synthesize the band-limited CIR and estimate the ToA.
    pub waveform: bool,
}

/// The channel of drop `drop_index` for configuration `id`, and the link it was drawn on.
pub fn realize_channel(
    sim: &SimConfig,
    id: ConfigId,
    drop_index: u64,
) -> Result<(Cir, GeometryLink, DropStreams)> {
    let mut streams = DropStreams::new(sim.rng_seed, drop_index);
    let g = &sim.geometry;
    let h = if g.ue_height_max > g.ue_height_min {
        streams
            .geometry
            .random_range(g.ue_height_min..g.ue_height_max)
    } else {
        g.ue_height_min
    };
    let link = g.link_at(h)?;
    let cir = realize_configuration(id, sim, &link, &mut streams)?;
    Ok((cir, link, streams))
}

pub fn realize_drop(
    sim: &SimConfig,
    id: ConfigId,
    drop_index: u64,
    waveform: bool,
) -> Result<RunRecord> {
    let (cir, link, mut streams) = realize_channel(sim, id, drop_index)?;
    let mut rec = RunRecord {
        drop_index,
        config_id: id,
        kec: kec(&cir, sim.upsilon)?,
        overall_k_db: overall_k(&cir)?,
        toa_error: None,
        rsrp_db: None,
        rsrpp_db: None,
        ue_height_m: link.ue_position.z,
        seed: sim.rng_seed,
    };
    if waveform {
        let blc = bandlimited_cir_noisy(&cir, &sim.signal, &mut streams.noise);
        rec.rsrp_db = Some(10.0 * blc.in_band_power().log10());
        match estimate_toa(&blc, &sim.toa) {
            Ok(est) => {
                let (_, rsrpp) = band_powers(&blc, &est);
                rec.toa_error = Some(est.error);
                rec.rsrpp_db = Some(rsrpp);
            }
            Err(Error::NoDetection) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(rec)
}

/// Maps `f` over `0..n` on the configured pool and returns results in index order.
pub fn map_drops<T, F>(n: u64, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match threads {
        Some(1) => (0..n).map(f).collect(),
        _ => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| Error::validation(format!("thread pool: {e}")))?;
            pool.install(|| (0..n).into_par_iter().map(&f).collect())
        }
    }
}

pub fn run_drops(sim: &SimConfig, id: ConfigId, opts: RunOptions) -> Result<Vec<RunRecord>> {
    sim.validate()?;
    sim.combiner.validate_for(id)?;
    map_drops(sim.num_drops as u64, opts.threads, |i| {
        realize_drop(sim, id, i, opts.waveform)
    })
}

fn header(metric: &str, config: &str, sim: &SimConfig, drops: usize) -> String {
    format!(
        "# ecsim schema={SCHEMA_VERSION} metric={metric} config={config} seed={} drops={drops}\n",
        sim.rng_seed
    )
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// `value,cum_fraction` rows; +∞ samples are written as `inf`.
fn cdf_csv(head: String, samples: &[f64]) -> Result<String> {
    let mut out = head;
    out.push_str("value,cum_fraction\n");
    if !samples.is_empty() {
        for (v, f) in ecdf_steps(samples)? {
            let _ = writeln!(out, "{},{}", fmt_db(v), f);
        }
    }
    Ok(out)
}

fn records_csv(head: String, recs: &[RunRecord]) -> String {
    let mut out = head;
    out.push_str(RunRecord::CSV_HEADER);
    out.push('\n');
    for r in recs {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsSummary {
    pub config_id: ConfigId,
    pub drops: usize,
    pub frac_no_ec: f64,
    pub frac_k_below_0: f64,
    pub median_overall_k_db: f64,
    pub records: Vec<RunRecord>,
}

impl StatsSummary {
    pub fn line(&self) -> String {
        format!(
            "{}: drops={} noEC={:.4} K<0dB={:.4} median_K={:.3} dB",
            self.config_id,
            self.drops,
            self.frac_no_ec,
            self.frac_k_below_0,
            self.median_overall_k_db
        )
    }
}

/// Overall-K and K_EC CDFs per configuration.
///
/// Writes `overall_k_cdf_<id>.csv`, `kec_cdf_<id>.csv`, `records_<id>.csv`
/// and `stats_summary.csv` into `out_dir` when given.
pub fn run_stats(
    sim: &SimConfig,
    ids: &[ConfigId],
    out_dir: Option<&Path>,
    opts: RunOptions,
) -> Result<Vec<StatsSummary>> {
    let opts = RunOptions {
        waveform: false,
        ..opts
    };
    let mut summaries = Vec::new();
    for &id in ids {
        let records = run_drops(sim, id, opts)?;
        let n = records.len();
        let ks: Vec<f64> = records.iter().map(|r| r.overall_k_db).collect();
        let kecs: Vec<f64> = records.iter().map(|r| r.kec.as_f64()).collect();
        let s = StatsSummary {
            config_id: id,
            drops: n,
            frac_no_ec: records.iter().filter(|r| r.kec.is_no_ec()).count() as f64 / n as f64,
            frac_k_below_0: ks.iter().filter(|&&k| k < 0.0).count() as f64 / n as f64,
            median_overall_k_db: quantile(&ks, 0.5)?,
            records,
        };
        if let Some(dir) = out_dir {
            ensure_dir(dir)?;
            let tag = id.as_str();
            write_file(
                &dir.join(format!("overall_k_cdf_{tag}.csv")),
                &cdf_csv(header("overall_k_dB", tag, sim, n), &ks)?,
            )?;
            write_file(
                &dir.join(format!("kec_cdf_{tag}.csv")),
                &cdf_csv(header("kec_dB", tag, sim, n), &kecs)?,
            )?;
            write_file(
                &dir.join(format!("records_{tag}.csv")),
                &records_csv(header("records", tag, sim, n), &s.records),
            )?;
        }
        summaries.push(s);
    }
    if let Some(dir) = out_dir {
        let mut out = header("stats_summary", &join_ids(ids), sim, sim.num_drops);
        out.push_str("config_id,drops,frac_noec,frac_k_below_0dB,median_overall_k_dB\n");
        for s in &summaries {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.config_id, s.drops, s.frac_no_ec, s.frac_k_below_0, s.median_overall_k_db
            );
        }
        write_file(&dir.join("stats_summary.csv"), &out)?;
    }
    Ok(summaries)
}

fn join_ids(ids: &[ConfigId]) -> String {
    ids.iter().map(|i| i.as_str()).collect::<Vec<_>>().join("+")
}

/// One K_EC group of the ToA experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct KecBin {
    pub label: String,
    /// Inclusive lower edge (−∞ for the first bin).
    pub lo: f64,
    /// Exclusive upper edge (+∞ for the last finite bin).
    pub hi: f64,
    pub no_ec: bool,
    /// Absolute ToA errors in seconds, sorted ascending.
    pub abs_errors: Vec<f64>,
}

impl KecBin {
    pub fn count(&self) -> usize {
        self.abs_errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abs_errors.is_empty()
    }

    pub fn median(&self) -> Option<f64> {
        quantile(&self.abs_errors, 0.5).ok()
    }

    pub fn p90(&self) -> Option<f64> {
        quantile(&self.abs_errors, 0.9).ok()
    }

    fn contains(&self, k: KecValue) -> bool {
        match k {
            KecValue::NoEc => self.no_ec,
            KecValue::Db(v) => !self.no_ec && v >= self.lo && v < self.hi,
        }
    }
}

fn edge_label(v: f64) -> String {
    format!("{v}").replace('-', "m")
}

/// Bins `< e0`, `[e0, e1)`, ..., `>= e_last`, plus the NoEC bin.
pub fn make_bins(edges: &[f64]) -> Result<Vec<KecBin>> {
    if edges.is_empty()
        || edges.windows(2).any(|w| !(w[0] < w[1]))
        || edges.iter().any(|e| !e.is_finite())
    {
        return Err(Error::validation(
            "K_EC bin edges must be finite and strictly increasing",
        ));
    }
    let bin = |label: String, lo: f64, hi: f64, no_ec: bool| KecBin {
        label,
        lo,
        hi,
        no_ec,
        abs_errors: Vec::new(),
    };
    let mut bins = vec![bin(
        format!("lt{}", edge_label(edges[0])),
        f64::NEG_INFINITY,
        edges[0],
        false,
    )];
    for w in edges.windows(2) {
        bins.push(bin(
            format!("{}to{}", edge_label(w[0]), edge_label(w[1])),
            w[0],
            w[1],
            false,
        ));
    }
    let last = edges[edges.len() - 1];
    bins.push(bin(
        format!("ge{}", edge_label(last)),
        last,
        f64::INFINITY,
        false,
    ));
    bins.push(bin("noec".into(), f64::INFINITY, f64::INFINITY, true));
    Ok(bins)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToaSummary {
    pub bins: Vec<KecBin>,
    pub no_detection: usize,
    pub records: Vec<RunRecord>,
}

impl ToaSummary {
    pub fn lines(&self) -> Vec<String> {
        let ns = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{:.3}", x * 1e9));
        let mut out: Vec<String> = self
            .bins
            .iter()
            .map(|b| {
                format!(
                    "K_EC {:>8}: n={:>6} median|err|={} ns p90|err|={} ns{}",
                    b.label,
                    b.count(),
                    ns(b.median()),
                    ns(b.p90()),
                    if b.is_empty() { " (EmptyBin)" } else { "" }
                )
            })
            .collect();
        out.push(format!("NoDetection: {}", self.no_detection));
        out
    }
}

/// Pools the listed configurations' drops, groups them by K_EC and reports
/// per-group absolute ToA errors.
///
/// Writes `toa_cdf_<label>.csv` per bin (values in ns), `toa_records.csv`
/// and `toa_summary.csv` when `out_dir` is given.
pub fn run_toa_cdf(
    sim: &SimConfig,
    ids: &[ConfigId],
    edges: &[f64],
    out_dir: Option<&Path>,
    opts: RunOptions,
) -> Result<ToaSummary> {
    let mut bins = make_bins(edges)?;
    let opts = RunOptions {
        waveform: true,
        ..opts
    };
    let mut records = Vec::new();
    for &id in ids {
        records.extend(run_drops(sim, id, opts)?);
    }
    let mut no_detection = 0;
    for r in &records {
        match r.toa_error {
            Some(e) => {
                let b = bins
                    .iter_mut()
                    .find(|b| b.contains(r.kec))
                    .expect("bins partition K_EC");
                b.abs_errors.push(e.abs());
            }
            None => no_detection += 1,
        }
    }
    for b in &mut bins {
        b.abs_errors.sort_by(f64::total_cmp);
    }
    let summary = ToaSummary {
        bins,
        no_detection,
        records,
    };
    if let Some(dir) = out_dir {
        ensure_dir(dir)?;
        let cfgs = join_ids(ids);
        let total = summary.records.len();
        for b in &summary.bins {
            let ns: Vec<f64> = b.abs_errors.iter().map(|e| e * 1e9).collect();
            let head = header(
                &format!("abs_toa_error_ns kec_bin={}", b.label),
                &cfgs,
                sim,
                b.count(),
            );
            write_file(
                &dir.join(format!("toa_cdf_{}.csv", b.label)),
                &cdf_csv(head, &ns)?,
            )?;
        }
        write_file(
            &dir.join("toa_records.csv"),
            &records_csv(header("toa_records", &cfgs, sim, total), &summary.records),
        )?;
        let mut out = header("toa_summary", &cfgs, sim, total);
        out.push_str("bin,count,median_abs_err_ns,p90_abs_err_ns,status\n");
        let ns = |v: Option<f64>| v.map_or(String::new(), |x| (x * 1e9).to_string());
        for b in &summary.bins {
            let status = if b.is_empty() { "EmptyBin" } else { "ok" };
            let _ = writeln!(
                out,
                "{},{},{},{},{status}",
                b.label,
                b.count(),
                ns(b.median()),
                ns(b.p90())
            );
        }
        let _ = writeln!(out, "NoDetection,{},,,", summary.no_detection);
        write_file(&dir.join("toa_summary.csv"), &out)?;
    }
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub h_min: f64,
    pub h_max: f64,
    pub steps: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            h_min: 0.7,
            h_max: 3.3,
            steps: 261,
        }
    }
}

impl SweepSpec {
    pub fn heights(&self) -> Result<Vec<f64>> {
        if !(self.h_min <= self.h_max) || self.steps < 1 || !self.h_max.is_finite() {
            return Err(Error::validation(
                "sweep needs h_min <= h_max and at least one step",
            ));
        }
        if self.h_min == self.h_max || self.steps == 1 {
            return Ok(vec![self.h_min]);
        }
        let step = (self.h_max - self.h_min) / (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.h_max
                } else {
                    self.h_min + i as f64 * step
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub height_m: f64,
    pub rsrp_db: f64,
    /// `None` when nothing was detected.
    pub rsrpp_db: Option<f64>,
    pub kec: KecValue,
    /// Excess delay of the injected ground reflection, seconds.
    pub gr_excess_delay: Option<f64>,
}

/// UE height sweep on one frozen realization.
///
/// One LSP draw and one statistical cluster set (drop `drop_index`) serve
/// every height; per height only the pathloss, the LOS phase and the ground
/// reflection follow the geometry. Writes `height_sweep_<id>.csv` when
/// `out_dir` is given.
pub fn run_height_sweep(
    sim: &SimConfig,
    sweep: &SweepSpec,
    id: ConfigId,
    drop_index: u64,
    out_dir: Option<&Path>,
) -> Result<Vec<SweepRow>> {
    sim.validate()?;
    sim.combiner.validate_for(id)?;
    let heights = sweep.heights()?;
    let mut streams = DropStreams::new(sim.rng_seed, drop_index);
    let lsp = draw_lsps(&sim.scenario, &mut streams.large_scale);
    let reference = sim.geometry.link_at(heights[0])?;
    let base_target = pathloss_db(&reference, &sim.scenario) + lsp.sf_db;
    let stat = statistical_cir(id, sim, &lsp, base_target, &mut streams)?;

    let mut rows = Vec::with_capacity(heights.len());
    for &h in &heights {
        let link = sim.geometry.link_at(h)?;
        let mut cir = stat.clone();
        cir.total_power_target_db = pathloss_db(&link, &sim.scenario) + lsp.sf_db;
        cir.renormalize();
        let cir = apply_geometry(cir, id, sim, &link)?;
        let gr_excess_delay = cir
            .clusters
            .iter()
            .find(|c| c.origin == crate::builder::Origin::GroundReflection)
            .map(|c| c.delay);
        let blc = bandlimited_cir(&cir, &sim.signal);
        let rsrpp_db = match estimate_toa(&blc, &sim.toa) {
            Ok(est) => Some(band_powers(&blc, &est).1),
            Err(Error::NoDetection) => None,
            Err(e) => return Err(e),
        };
        rows.push(SweepRow {
            height_m: h,
            rsrp_db: 10.0 * blc.in_band_power().log10(),
            rsrpp_db,
            kec: kec(&cir, sim.upsilon)?,
            gr_excess_delay,
        });
    }

    if let Some(dir) = out_dir {
        ensure_dir(dir)?;
        let mut out = header(
            &format!("height_sweep drop={drop_index}"),
            id.as_str(),
            sim,
            1,
        );
        out.push_str("height_m,rsrp_dB,rsrpp_dB,kec_dB\n");
        for r in &rows {
            let rsrpp = r
                .rsrpp_db
                .map_or("NoDetection".to_string(), |v| v.to_string());
            let _ = writeln!(out, "{},{},{},{}", r.height_m, r.rsrp_db, rsrpp, r.kec);
        }
        write_file(&dir.join(format!("height_sweep_{}.csv", id.as_str())), &out)?;
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct CirDump {
    pub cir: Cir,
    pub blc: BandlimitedCir,
    pub link: GeometryLink,
    pub files: Vec<PathBuf>,
}

/// Wideband taps and band-limited trace of one drop.
///
/// Files: `cir_wideband_<id>_<drop>.csv` (`delay_ns,power_dB,phase_rad,origin,builder`),
/// `cir_bandlimited_<id>_<drop>.csv` (`time_ns,real,imag,magnitude_dB`) and
/// `cir_draws_<id>_<drop>.csv` (`x,z_dB`).
pub fn dump_cir(
    sim: &SimConfig,
    id: ConfigId,
    drop_index: u64,
    out_dir: Option<&Path>,
) -> Result<CirDump> {
    sim.validate()?;
    sim.combiner.validate_for(id)?;
    let (cir, link, mut streams) = realize_channel(sim, id, drop_index)?;
    let blc = bandlimited_cir_noisy(&cir, &sim.signal, &mut streams.noise);
    let mut files = Vec::new();
    if let Some(dir) = out_dir {
        ensure_dir(dir)?;
        let stem = format!("{}_{drop_index}", id.as_str());
        let head = |m: &str| header(m, id.as_str(), sim, 1);

        let mut wb = head("cir_wideband");
        let _ = writeln!(
            wb,
            "# ue_height_m={} los_delay_ns={}",
            link.ue_position.z,
            cir.los_delay_abs * 1e9
        );
        wb.push_str("delay_ns,power_dB,phase_rad,origin,builder\n");
        for c in &cir.clusters {
            let _ = writeln!(
                wb,
                "{},{},{},{},{}",
                c.delay * 1e9,
                10.0 * c.power.log10(),
                c.phase,
                c.origin.as_str(),
                c.tag.as_str()
            );
        }
        let mut bl = head("cir_bandlimited");
        bl.push_str("time_ns,real,imag,magnitude_dB\n");
        for (i, s) in blc.samples.iter().enumerate() {
            let _ = writeln!(
                bl,
                "{},{},{},{}",
                blc.time_of(i as f64) * 1e9,
                s.re,
                s.im,
                20.0 * s.norm().log10()
            );
        }
        let mut dr = head("cluster_draws");
        dr.push_str("x,z_dB\n");
        for d in &cir.draws {
            let _ = writeln!(dr, "{},{}", d.x, d.z_db);
        }
        for (name, text) in [("wideband", wb), ("bandlimited", bl), ("draws", dr)] {
            let path = dir.join(format!("cir_{name}_{stem}.csv"));
            write_file(&path, &text)?;
            files.push(path);
        }
    }
    Ok(CirDump {
        cir,
        blc,
        link,
        files,
    })
}

/// Gnuplot script for the CSVs written by the other subcommands.
pub fn plot_script(kind: &str) -> Result<String> {
    let body = match kind {
        "stats" => {
            "set datafile separator ','\nset key bottom right\nset ylabel 'CDF'\n\
             set xlabel 'overall K [dB]'\nset output 'overall_k_cdf.png'\nset terminal pngcairo\n\
             plot for [c in '104.20 104.60 104.63 104.66'] 'overall_k_cdf_'.c.'.csv' using 1:2 with steps title c\n\
             set xlabel 'K_EC [dB]'\nset output 'kec_cdf.png'\n\
             plot for [c in '104.20 104.60 104.63 104.66'] 'kec_cdf_'.c.'.csv' using 1:2 with steps title c\n"
        }
        "toa-cdf" => {
            "set datafile separator ','\nset key bottom right\nset terminal pngcairo\nset output 'toa_cdf.png'\n\
             set xlabel '|ToA error| [ns]'\nset ylabel 'CDF'\n\
             plot for [b in 'lt0 0to5 5to10 10to15 ge15 noec'] 'toa_cdf_'.b.'.csv' using 1:2 with steps title b\n"
        }
        "height-sweep" => {
            "set datafile separator ','\nset terminal pngcairo\nset output 'height_sweep.png'\n\
             set xlabel 'UE height [m]'\nset ylabel 'power [dB]'\n\
             plot for [c in '104.20 104.60'] 'height_sweep_'.c.'.csv' using 1:2 with lines title 'RSRP '.c, \\\n\
             \x20    for [c in '104.20 104.60'] 'height_sweep_'.c.'.csv' using 1:3 with lines title 'RSRPP '.c\n"
        }
        "dump-cir" => {
            "# usage: gnuplot -e \"stem='104.60_0'\" dump_cir.gp\n\
             set datafile separator ','\nset terminal pngcairo\nset output 'cir_'.stem.'.png'\n\
             set xlabel 'delay [ns]'\nset ylabel 'magnitude [dB]'\n\
             plot 'cir_bandlimited_'.stem.'.csv' using 1:4 with lines title 'band-limited', \\\n\
             \x20    'cir_wideband_'.stem.'.csv' using 1:2 with impulses title 'wideband'\n"
        }
        other => {
            return Err(Error::validation(format!(
                "unknown plot kind '{other}' (expected stats, toa-cdf, height-sweep, dump-cir)"
            )))
        }
    };
    Ok(body.to_string())
}
