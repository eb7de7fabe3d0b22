//! Command-line pipeline over texts and manifests.
//!
//! [`run`] executes one [`RunConfig`] inside a worker pool of `jobs`
//! threads and writes CSV/JSON artifacts below `out_dir`. Per-item failures
//! are collected so that the remaining items still produce output.

pub mod args;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use lexnet::corpus::{load_document, load_manifest, Language, TextDocument};
use lexnet::formats::{
    curve_to_string, parse_curve, write_fit_curve, write_metrics, write_report, FitReport, MetricsRow, ReportRow,
};
use lexnet::growthcurve::{curve_for_symbols, group_average, CheckpointSchedule, CurveMode, GrowthCurve, ShiftSchedule};
use lexnet::metrics::{aspl, degree_histogram, fit_degree_exponent, heaps_curve, heaps_fit, zipf_fit, DEFAULT_KMIN};
use lexnet::model::{fit, FitParams};
use lexnet::netbuild::{full_network, SymbolStream};
use lexnet::synth::{expected_nodes, synth_curve, SynthConfig, DEFAULT_SEED};
use lexnet::tokenizer::{
    parse_inventory, parse_mark_list, punctuation_census, tokenize, DictionarySegmenter, PunctuationInventory,
    Segmenter, TokenStream, WhitespaceSegmenter,
};
use lexnet::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Tokenize,
    Build,
    Analyze,
    Curve,
    Fit,
    Synth,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSelection {
    Tokens,
    WordsOnly,
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> Vec<CurveMode> {
        match self {
            ModeSelection::Tokens => vec![CurveMode::Tokens],
            ModeSelection::WordsOnly => vec![CurveMode::WordsOnly],
            ModeSelection::Both => vec![CurveMode::Tokens, CurveMode::WordsOnly],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub mode: ModeSelection,
    pub manifest: Option<PathBuf>,
    pub texts: Vec<PathBuf>,
    /// Language and segmentation flag for `texts`.
    pub language: Language,
    pub pre_segmented: bool,
    /// Curve CSVs to fit.
    pub curves: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub checkpoints: Option<String>,
    pub dtau_bands: Option<String>,
    pub max_n: Option<usize>,
    pub jobs: usize,
    pub seed: u64,
    pub no_cache: bool,
    pub export_edges: bool,
    pub terminators: Option<String>,
    pub marks: Option<String>,
    pub excluded: Option<String>,
    pub inventory: Option<PathBuf>,
    /// Word list for segmenting unsegmented Chinese text.
    pub dictionary: Option<PathBuf>,
    pub kmin: usize,
    pub p0: f64,
    pub delta: f64,
    pub eta: f64,
    pub steps: u64,
    pub realizations: usize,
    pub resample_duplicates: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let synth = SynthConfig::default();
        Self {
            command,
            mode: ModeSelection::Both,
            manifest: None,
            texts: Vec::new(),
            language: Language::English,
            pre_segmented: false,
            curves: Vec::new(),
            out_dir: PathBuf::from("lexnet-out"),
            checkpoints: None,
            dtau_bands: None,
            max_n: None,
            jobs: 1,
            seed: DEFAULT_SEED,
            no_cache: false,
            export_edges: false,
            terminators: None,
            marks: None,
            excluded: None,
            inventory: None,
            dictionary: None,
            kmin: DEFAULT_KMIN,
            p0: synth.p0,
            delta: synth.delta,
            eta: synth.eta,
            steps: synth.steps,
            realizations: 10,
            resample_duplicates: true,
        }
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            p0: self.p0,
            delta: self.delta,
            eta: self.eta,
            seed: self.seed,
            steps: self.steps,
            resample_duplicates: self.resample_duplicates,
            ..SynthConfig::default()
        }
    }

    fn shifts(&self) -> Result<ShiftSchedule> {
        match &self.dtau_bands {
            Some(s) => s.parse(),
            None => Ok(ShiftSchedule::default()),
        }
    }

    fn explicit_checkpoints(&self) -> Result<Option<CheckpointSchedule>> {
        self.checkpoints.as_deref().map(str::parse).transpose()
    }

    fn needs_texts(&self) -> bool {
        !matches!(self.command, Command::Synth | Command::Fit)
    }
}

/// Everything that would make `run` fail before doing any work. Reads
/// inputs but writes nothing.
pub fn validate_config(cfg: &RunConfig) -> Vec<String> {
    let mut problems = Vec::new();
    if cfg.jobs == 0 {
        problems.push("jobs must be at least 1".to_string());
    }
    for path in &cfg.texts {
        if !path.is_file() {
            problems.push(format!("text not found: {}", path.display()));
        }
    }
    if let Some(path) = &cfg.manifest {
        if !path.is_file() {
            problems.push(format!("manifest not found: {}", path.display()));
        } else if let Err(e) = load_manifest(path) {
            problems.push(format!("manifest {}: {e}", path.display()));
        }
    }
    for path in &cfg.curves {
        if !path.is_file() {
            problems.push(format!("curve file not found: {}", path.display()));
        }
    }
    if let Some(path) = &cfg.dictionary {
        if !path.is_file() {
            problems.push(format!("dictionary not found: {}", path.display()));
        }
    }
    if let Some(path) = &cfg.inventory {
        match fs::read_to_string(path) {
            Err(_) => problems.push(format!("inventory not found: {}", path.display())),
            Ok(text) => {
                if let Err(e) = parse_inventory(&text) {
                    problems.push(format!("inventory {}: {e}", path.display()));
                }
            }
        }
    }
    for (flag, value) in [("terminators", &cfg.terminators), ("marks", &cfg.marks), ("excluded", &cfg.excluded)] {
        if let Some(v) = value {
            if let Err(e) = parse_mark_list(v) {
                problems.push(format!("--{flag}: {e}"));
            }
        }
    }
    if let Err(e) = cfg.explicit_checkpoints() {
        problems.push(format!("checkpoint schedule: {e}"));
    }
    if let Err(e) = cfg.shifts() {
        problems.push(format!("shift schedule: {e}"));
    }
    if let Some(m) = cfg.max_n {
        if m < 2 {
            problems.push(format!("max-n must be at least 2, got {m}"));
        }
    }
    match cfg.command {
        Command::Synth => {
            problems.extend(cfg.synth_config().problems());
            if cfg.realizations == 0 {
                problems.push("realizations must be at least 1".to_string());
            }
        }
        Command::Fit => {
            if cfg.curves.is_empty() && cfg.texts.is_empty() && cfg.manifest.is_none() {
                problems.push("fit needs --curve, --text or --manifest".to_string());
            }
        }
        _ => {
            if cfg.needs_texts() && cfg.texts.is_empty() && cfg.manifest.is_none() {
                problems.push("no input: give --text or --manifest".to_string());
            }
        }
    }
    if cfg.kmin < 1 {
        problems.push("kmin must be at least 1".to_string());
    }
    if let Some(p) = out_dir_problem(&cfg.out_dir) {
        problems.push(p);
    }
    problems
}

fn out_dir_problem(dir: &Path) -> Option<String> {
    let mut probe = Some(dir);
    while let Some(p) = probe {
        if p.as_os_str().is_empty() {
            return None;
        }
        if let Ok(meta) = fs::metadata(p) {
            if !meta.is_dir() {
                return Some(format!("output path is not a directory: {}", p.display()));
            }
            if meta.permissions().readonly() {
                return Some(format!("output directory is not writable: {}", p.display()));
            }
            return None;
        }
        probe = p.parent();
    }
    None
}

/// A failure tied to one item of the run.
#[derive(Debug)]
pub struct ItemError {
    pub item: String,
    pub error: Error,
}

#[derive(Debug, Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    item: Option<&'a str>,
}

/// One-line machine-readable error.
pub fn error_json(error: &Error, item: Option<&str>) -> String {
    serde_json::to_string(&ErrorJson { error: error.kind(), message: error.to_string(), item })
        .expect("error json")
}

#[derive(Debug, Default)]
pub struct RunSummary {
    /// Files written, in order.
    pub written: Vec<PathBuf>,
    pub errors: Vec<ItemError>,
}

impl RunSummary {
    pub fn success(&self) -> bool {
        self.errors.is_empty()
    }

    fn record<T>(&mut self, item: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(error) => {
                self.errors.push(ItemError { item: item.to_string(), error });
                None
            }
        }
    }
}

/// Validates, then runs the configured command in a pool of `jobs`
/// threads.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    let problems = validate_config(cfg);
    if !problems.is_empty() {
        return Err(Error::InvalidConfig(problems.join("; ")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| Runner::new(cfg).and_then(|mut r| r.execute()))
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    shifts: ShiftSchedule,
    dictionary: Option<DictionarySegmenter>,
    summary: RunSummary,
}

struct Prepared {
    doc: TextDocument,
    stream: TokenStream,
}

impl<'a> Runner<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self> {
        let dictionary = match &cfg.dictionary {
            Some(p) => Some(DictionarySegmenter::from_word_list(&read(p)?)),
            None => None,
        };
        Ok(Self { cfg, shifts: cfg.shifts()?, dictionary, summary: RunSummary::default() })
    }

    fn execute(&mut self) -> Result<RunSummary> {
        match self.cfg.command {
            Command::Tokenize => self.tokenize_cmd()?,
            Command::Build => self.build_cmd()?,
            Command::Analyze => self.analyze_cmd()?,
            Command::Curve => {
                self.curves_for_texts()?;
            }
            Command::Fit => self.fit_cmd()?,
            Command::Synth => self.synth_cmd()?,
            Command::Report => self.report_cmd()?,
        }
        Ok(std::mem::take(&mut self.summary))
    }

    fn documents(&self) -> Result<Vec<TextDocument>> {
        let mut docs = Vec::new();
        if let Some(m) = &self.cfg.manifest {
            docs.extend(load_manifest(m)?.load_documents()?);
        }
        for path in &self.cfg.texts {
            docs.push(load_document(path, self.cfg.language, self.cfg.pre_segmented)?);
        }
        let mut seen = HashSet::new();
        for d in &docs {
            if !seen.insert(d.id.clone()) {
                return Err(Error::DuplicateId(d.id.clone()));
            }
        }
        Ok(docs)
    }

    fn inventory(&self, language: Language) -> Result<PunctuationInventory> {
        let base = match &self.cfg.inventory {
            Some(p) => parse_inventory(&read(p)?)?,
            None => PunctuationInventory::for_language(language),
        };
        let pick = |flag: &Option<String>, current: &std::collections::BTreeSet<String>| match flag {
            Some(list) => parse_mark_list(list),
            None => Ok(current.clone()),
        };
        PunctuationInventory::new(
            pick(&self.cfg.terminators, base.terminators())?,
            pick(&self.cfg.marks, base.other_marks())?,
            pick(&self.cfg.excluded, base.excluded())?,
            base.newline_terminates,
        )
    }

    fn segmenter(&self, doc: &TextDocument) -> Box<dyn Segmenter> {
        if doc.language == Language::Chinese && !doc.pre_segmented {
            Box::new(self.dictionary.clone().unwrap_or_else(|| DictionarySegmenter::new(Vec::<String>::new())))
        } else {
            Box::new(WhitespaceSegmenter)
        }
    }

    /// Loads and tokenizes every input; tokenization failures are recorded
    /// per document.
    fn prepared(&mut self) -> Result<Vec<Prepared>> {
        let mut out = Vec::new();
        for doc in self.documents()? {
            let inv = self.inventory(doc.language)?;
            let seg = self.segmenter(&doc);
            let r = tokenize(&doc, &inv, seg.as_ref());
            if let Some(stream) = self.summary.record(&doc.id, r) {
                out.push(Prepared { doc, stream });
            }
        }
        Ok(out)
    }

    fn write(&mut self, rel: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
        let path = self.cfg.out_dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.summary.written.push(path);
        Ok(())
    }

    fn tokenize_cmd(&mut self) -> Result<()> {
        for p in self.prepared()? {
            for mode in self.cfg.mode.modes() {
                let item = format!("{}/{}", p.doc.id, mode);
                let Some(stream) = self.summary.record(&item, mode.select(&p.stream)) else { continue };
                let mut text = String::new();
                for s in stream.surfaces() {
                    text.push_str(s);
                    text.push('\n');
                }
                self.write(format!("tokens/{}.{}.tokens", p.doc.id, mode), text.as_bytes())?;
            }
            let mut census = String::from("# lexnet census v1\nmark,count\n");
            for (mark, count) in punctuation_census(&p.stream) {
                census.push_str(&csv_field(&mark));
                census.push_str(&format!(",{count}\n"));
            }
            self.write(format!("tokens/{}.census.csv", p.doc.id), census.as_bytes())?;
        }
        Ok(())
    }

    fn export_network(&mut self, id: &str, mode: CurveMode, symbols: &SymbolStream) -> Result<()> {
        let net = full_network(symbols);
        let mut edges = Vec::new();
        net.write_edge_list(&mut edges).map_err(|e| Error::io("<edges>", e))?;
        self.write(format!("networks/{id}.{mode}.edges"), &edges)?;
        let mut nodes = Vec::new();
        net.write_node_table(symbols.interner(), &mut nodes).map_err(|e| Error::io("<nodes>", e))?;
        self.write(format!("networks/{id}.{mode}.nodes"), &nodes)
    }

    fn build_cmd(&mut self) -> Result<()> {
        for p in self.prepared()? {
            for mode in self.cfg.mode.modes() {
                let item = format!("{}/{}", p.doc.id, mode);
                let Some(stream) = self.summary.record(&item, mode.select(&p.stream)) else { continue };
                self.export_network(&p.doc.id, mode, &SymbolStream::new(&stream))?;
            }
        }
        Ok(())
    }

    fn analyze_cmd(&mut self) -> Result<()> {
        let mut rows = Vec::new();
        for p in self.prepared()? {
            for mode in self.cfg.mode.modes() {
                let item = format!("{}/{}", p.doc.id, mode);
                let Some(stream) = self.summary.record(&item, mode.select(&p.stream)) else { continue };
                let symbols = SymbolStream::new(&stream);
                let net = full_network(&symbols);
                let Some(l) = self.summary.record(&item, aspl(&net)) else { continue };
                let hist = degree_histogram(&net);
                let gamma = self.summary.record(&item, fit_degree_exponent(&hist, self.cfg.kmin)).map(|f| f.gamma);
                let zipf = self.summary.record(&item, zipf_fit(&stream));
                let heaps = heaps_fit(&heaps_curve(&stream));
                rows.push(MetricsRow {
                    text_id: p.doc.id.clone(),
                    mode: mode.to_string(),
                    n: net.n_nodes(),
                    e: net.n_edges(),
                    aspl: l,
                    max_degree: hist.max_degree(),
                    gamma_deg: gamma,
                    zipf_alpha: zipf.map(|z| z.zipf_alpha),
                    beta: zipf.map(|z| z.beta),
                    delta: Some(heaps.delta),
                });
                if self.cfg.export_edges {
                    self.export_network(&p.doc.id, mode, &symbols)?;
                }
            }
        }
        let mut buf = Vec::new();
        write_metrics(&rows, &mut buf)?;
        self.write("metrics.csv", &buf)
    }

    fn checkpoints_for(&self, vocabulary: usize) -> Result<CheckpointSchedule> {
        let Some(explicit) = self.cfg.explicit_checkpoints()? else {
            let top = self.cfg.max_n.map_or(vocabulary, |m| m.min(vocabulary));
            return Ok(CheckpointSchedule::default_for(top));
        };
        match self.cfg.max_n {
            None => Ok(explicit),
            Some(m) => explicit
                .capped(m)
                .ok_or_else(|| Error::InvalidConfig(format!("no checkpoint at or below max-n {m}"))),
        }
    }

    /// Curve from the cache when allowed, else computed and cached.
    fn curve(&mut self, id: &str, mode: CurveMode, symbols: &SymbolStream, cp: &CheckpointSchedule) -> Result<GrowthCurve> {
        let key = cache_key(id, mode, symbols, cp, &self.shifts);
        let cache_path = self.cfg.out_dir.join("cache").join(format!("{key}.csv"));
        if !self.cfg.no_cache {
            if let Ok(text) = fs::read_to_string(&cache_path) {
                if let Ok(c) = parse_curve(&text) {
                    if c.text_id == id && c.mode == mode {
                        return Ok(c);
                    }
                }
            }
        }
        let c = curve_for_symbols(symbols, id, mode, cp, &self.shifts)?;
        if let Some(parent) = cache_path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&cache_path, curve_to_string(&c)).map_err(|e| Error::io(&cache_path, e))?;
        Ok(c)
    }

    /// Per-text and per-collection curves for every requested mode.
    fn curves_for_texts(&mut self) -> Result<Vec<(Prepared, Vec<GrowthCurve>)>> {
        let modes = self.cfg.mode.modes();
        let mut out = Vec::new();
        let mut groups: BTreeMap<(String, CurveMode), Vec<GrowthCurve>> = BTreeMap::new();
        for p in self.prepared()? {
            let mut selected = Vec::new();
            for &mode in &modes {
                let item = format!("{}/{}", p.doc.id, mode);
                if let Some(s) = self.summary.record(&item, mode.select(&p.stream)) {
                    selected.push((mode, SymbolStream::new(&s)));
                }
            }
            // One grid for all modes of a text, so that paired curves line up.
            let vocabulary = selected.iter().map(|(_, s)| s.vocabulary_size()).min().unwrap_or(0);
            let Some(cp) = self.summary.record(&p.doc.id, self.checkpoints_for(vocabulary)) else { continue };
            let mut curves = Vec::new();
            for (mode, symbols) in &selected {
                let item = format!("{}/{}", p.doc.id, mode);
                let r = self.curve(&p.doc.id, *mode, symbols, &cp);
                let Some(c) = self.summary.record(&item, r) else { continue };
                self.write(format!("curves/{}.{}.csv", p.doc.id, mode), curve_to_string(&c).as_bytes())?;
                if self.cfg.export_edges {
                    self.export_network(&p.doc.id, *mode, symbols)?;
                }
                if let Some(g) = &p.doc.collection {
                    groups.entry((g.clone(), *mode)).or_default().push(c.clone());
                }
                curves.push(c);
            }
            out.push((p, curves));
        }
        for ((group, mode), curves) in groups {
            let id = format!("group-{group}");
            if let Some(avg) = self.summary.record(&format!("{id}/{mode}"), group_average(&id, &curves)) {
                self.write(format!("curves/{id}.{mode}.csv"), curve_to_string(&avg).as_bytes())?;
            }
        }
        Ok(out)
    }

    fn write_fit(&mut self, curve: &GrowthCurve) -> Result<Option<FitParams>> {
        let item = format!("{}/{}", curve.text_id, curve.mode);
        let Some(f) = self.summary.record(&item, fit(curve, None)) else { return Ok(None) };
        let report = FitReport {
            text_id: curve.text_id.clone(),
            mode: curve.mode.to_string(),
            n_samples: curve.samples.len(),
            fit: f,
        };
        let mut json = serde_json::to_string_pretty(&report).expect("fit json");
        json.push('\n');
        self.write(format!("fits/{}.{}.json", curve.text_id, curve.mode), json.as_bytes())?;
        let mut buf = Vec::new();
        write_fit_curve(curve, &f.params, &mut buf)?;
        self.write(format!("fits/{}.{}.csv", curve.text_id, curve.mode), &buf)?;
        Ok(Some(f))
    }

    fn fit_cmd(&mut self) -> Result<()> {
        for path in self.cfg.curves.clone() {
            let r = read(&path).and_then(|t| parse_curve(&t));
            if let Some(c) = self.summary.record(&path.display().to_string(), r) {
                self.write_fit(&c)?;
            }
        }
        if !self.cfg.texts.is_empty() || self.cfg.manifest.is_some() {
            for (_, curves) in self.curves_for_texts()? {
                for c in &curves {
                    self.write_fit(c)?;
                }
            }
        }
        Ok(())
    }

    fn synth_cmd(&mut self) -> Result<()> {
        let cfg = self.cfg.synth_config();
        let reachable = (0.9 * expected_nodes(&cfg)).floor().max(2.0) as usize;
        let cp = self.checkpoints_for(reachable)?;
        let c = synth_curve(&cfg, &cp, self.cfg.realizations)?;
        self.write(format!("curves/{}.csv", c.text_id), curve_to_string(&c).as_bytes())
    }

    fn report_cmd(&mut self) -> Result<()> {
        let mut rows = Vec::new();
        for (_, curves) in self.curves_for_texts()? {
            for c in &curves {
                let f = self.write_fit(c)?;
                rows.extend(ReportRow::from_curve(c, f.as_ref()));
            }
        }
        let mut buf = Vec::new();
        write_report(&rows, &mut buf)?;
        self.write("report.csv", &buf)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Content hash of everything a curve depends on.
pub fn cache_key(
    id: &str,
    mode: CurveMode,
    symbols: &SymbolStream,
    checkpoints: &CheckpointSchedule,
    shifts: &ShiftSchedule,
) -> String {
    let mut h = Sha256::new();
    h.update(b"lexnet curve v1\0");
    h.update(id.as_bytes());
    h.update(b"\0");
    h.update(mode.as_str().as_bytes());
    h.update(b"\0");
    for n in checkpoints.points() {
        h.update(n.to_le_bytes());
    }
    h.update(b"\0");
    h.update(shifts.to_string().as_bytes());
    h.update(b"\0");
    for &s in symbols.symbols() {
        h.update(symbols.interner().surface(s).as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}
