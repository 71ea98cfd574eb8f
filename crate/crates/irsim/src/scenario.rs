//! Scenario configuration: geometry, powers, fading and uncertainty
//! parameters, plus the flat key-value document format they load from.
//!
//! Every key has a default taken from the reference four-user deployment, so
//! an empty document is a complete scenario. Dotted keys index list entries
//! (`irs.2 = ...`) and per-link overrides (`v_i2u.2.3 = inf`). All internal
//! quantities are linear watts; dB and dBm appear only in this module's
//! boundary conversions.

use crate::channel::{noise_power, path_loss, FadingParams, RicianK};
use crate::error::{Error, Result};
use crate::geometry::{bs_irs_angles, link_geometry, BsIrsAngles, LinkGeometry, Position3};
use std::path::Path;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Per-user power fractions.
#[derive(Debug, Clone, PartialEq)]
pub enum Eta {
    Uniform,
    Explicit(Vec<f64>),
}

impl Eta {
    pub fn values(&self, users: usize) -> Vec<f64> {
        match self {
            Eta::Uniform => vec![1.0 / users as f64; users],
            Eta::Explicit(v) => v.clone(),
        }
    }
}

/// Full static description of a deployment: BS/IRS/user geometry, fading
/// parameters, powers, and the location-uncertainty radius.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub bs: Position3,
    pub irs: Vec<Position3>,
    pub users_est: Vec<Position3>,
    /// Location uncertainty radius, meters.
    pub upsilon: f64,
    pub n_antennas: usize,
    pub m_elements: usize,
    pub k_users: usize,
    pub rho_d_dbm: f64,
    /// Optional ceiling on the total transmit power the power-control
    /// solver may allocate. None reproduces the unconstrained formulation.
    pub rho_d_cap_dbm: Option<f64>,
    pub eta: Eta,
    /// Path loss at the 1 m reference distance, dB.
    pub c0_db: f64,
    pub kappa_b2i: f64,
    pub kappa_i2u: f64,
    /// Rician K-factor of each BS-IRS link.
    pub v_b2i: Vec<RicianK>,
    /// Rician K-factor of each IRS-user link, indexed [irs][user].
    pub v_i2u: Vec<Vec<RicianK>>,
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_hz: f64,
    pub seed: u64,
    /// IRS serving each user (0-based). Defaults to the identity pairing.
    pub assignment: Vec<usize>,
}

impl ScenarioConfig {
    /// The reference deployment: one BS at the origin, four IRSs, four
    /// users, N = 5, M = 16, 30 dBm, path-loss exponent 2.5, Rician factor 5.
    pub fn table1() -> Self {
        let irs = vec![
            Position3::new(240.0, 178.0, -20.0),
            Position3::new(333.0, 68.0, -20.0),
            Position3::new(362.0, -75.0, -20.0),
            Position3::new(319.0, -241.0, -20.0),
        ];
        let users_est = vec![
            Position3::new(224.0, 168.0, -40.0),
            Position3::new(314.0, 64.0, -40.0),
            Position3::new(343.0, -71.0, -40.0),
            Position3::new(303.0, -229.0, -40.0),
        ];
        ScenarioConfig {
            bs: Position3::new(0.0, 0.0, 0.0),
            irs,
            users_est,
            upsilon: 0.5,
            n_antennas: 5,
            m_elements: 16,
            k_users: 4,
            rho_d_dbm: 30.0,
            rho_d_cap_dbm: None,
            eta: Eta::Uniform,
            c0_db: -30.0,
            kappa_b2i: 2.5,
            kappa_i2u: 2.5,
            v_b2i: vec![RicianK::Finite(5.0); 4],
            v_i2u: vec![vec![RicianK::Finite(5.0); 4]; 4],
            bandwidth_hz: 180e3,
            noise_psd_dbm_hz: -169.0,
            seed: 1,
            assignment: (0..4).collect(),
        }
    }

    /// Synthetic deployment with `k_users` IRSs placed at exactly
    /// interference-free directions relative to the BS: consecutive
    /// effective-angle gaps of 2/N, so every cross steering inner product is
    /// a Dirichlet-kernel null. Each IRS serves one user offset a short
    /// distance below it. Requires `k_users <= n_antennas`.
    pub fn orthogonal_directions(k_users: usize, n_antennas: usize) -> Self {
        assert!(k_users >= 1 && k_users <= n_antennas);
        let d = 300.0;
        let z = -20.0;
        let mut irs = Vec::with_capacity(k_users);
        let mut users_est = Vec::with_capacity(k_users);
        for i in 0..k_users {
            // aod_i = aod_0 + 2 i / N, centered around zero.
            let aod = -((k_users - 1) as f64) / n_antennas as f64
                + 2.0 * i as f64 / n_antennas as f64;
            let y = -aod * d;
            let x = (d * d - y * y - z * z).sqrt();
            irs.push(Position3::new(x, y, z));
            users_est.push(Position3::new(x - 16.0, y - 10.0, z - 20.0));
        }
        let mut sc = Self::table1();
        sc.irs = irs;
        sc.users_est = users_est;
        sc.k_users = k_users;
        sc.n_antennas = n_antennas;
        sc.v_b2i = vec![RicianK::Finite(5.0); k_users];
        sc.v_i2u = vec![vec![RicianK::Finite(5.0); k_users]; k_users];
        sc.assignment = (0..k_users).collect();
        sc
    }

    /// The reference deployment with the alternate IRS coordinates whose
    /// directions relative to the BS are deliberately not orthogonal.
    pub fn nonorthogonal_directions() -> Self {
        let mut sc = Self::table1();
        sc.irs = vec![
            Position3::new(278.0, 113.0, -20.0),
            Position3::new(338.0, 41.0, -20.0),
            Position3::new(367.0, -45.0, -20.0),
            Position3::new(370.0, -151.0, -20.0),
        ];
        sc
    }

    pub fn rho_d_watts(&self) -> f64 {
        dbm_to_watts(self.rho_d_dbm)
    }

    pub fn rho_d_cap_watts(&self) -> Option<f64> {
        self.rho_d_cap_dbm.map(dbm_to_watts)
    }

    pub fn noise_watts(&self) -> f64 {
        noise_power(self.bandwidth_hz, self.noise_psd_dbm_hz)
    }

    pub fn with_upsilon(mut self, upsilon: f64) -> Self {
        self.upsilon = upsilon;
        self
    }

    pub fn with_rho_d_dbm(mut self, dbm: f64) -> Self {
        self.rho_d_dbm = dbm;
        self
    }

    pub fn with_m_elements(mut self, m: usize) -> Self {
        self.m_elements = m;
        self
    }

    pub fn with_n_antennas(mut self, n: usize) -> Self {
        self.n_antennas = n;
        self
    }

    /// Set every link's Rician factor to the same value.
    pub fn with_rician_all(mut self, v: RicianK) -> Self {
        self.v_b2i = vec![v; self.k_users];
        self.v_i2u = vec![vec![v; self.k_users]; self.k_users];
        self
    }

    /// Consistency checks shared by the parser and hand-built configs.
    pub fn validate(&self) -> Result<()> {
        let k = self.k_users;
        if k == 0 {
            return Err(Error::config("k", "at least one user is required"));
        }
        if self.irs.len() != k {
            return Err(Error::config(
                "irs",
                format!("found {} entries but `k` = {}", self.irs.len(), k),
            ));
        }
        if self.users_est.len() != k {
            return Err(Error::config(
                "user",
                format!("found {} entries but `k` = {}", self.users_est.len(), k),
            ));
        }
        if self.n_antennas == 0 {
            return Err(Error::config("n", "antenna count must be >= 1"));
        }
        if self.m_elements == 0 {
            return Err(Error::config("m", "element count must be >= 1"));
        }
        if !(self.upsilon >= 0.0) || !self.upsilon.is_finite() {
            return Err(Error::config("upsilon", "must be finite and >= 0"));
        }
        if !self.rho_d_dbm.is_finite() {
            return Err(Error::config("rho_d_dbm", "must be finite"));
        }
        if let Some(cap) = self.rho_d_cap_dbm {
            if !cap.is_finite() {
                return Err(Error::config("rho_d_cap_dbm", "must be finite"));
            }
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::config("bandwidth_hz", "must be > 0"));
        }
        if self.bs != Position3::new(0.0, 0.0, 0.0) {
            return Err(Error::config(
                "bs",
                "the angle model places the BS at the coordinate origin",
            ));
        }
        let mut points = vec![("bs", self.bs)];
        for (i, p) in self.irs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::config(format!("irs.{}", i + 1), "non-finite coordinate"));
            }
            points.push(("irs", *p));
        }
        for (i, p) in self.users_est.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::config(format!("user.{}", i + 1), "non-finite coordinate"));
            }
            points.push(("user", *p));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].1 == points[j].1 {
                    return Err(Error::config(
                        points[j].0,
                        "coincident points make the geometry degenerate",
                    ));
                }
            }
        }
        if let Eta::Explicit(values) = &self.eta {
            if values.len() != k {
                return Err(Error::config(
                    "eta",
                    format!("expected {} coefficients, found {}", k, values.len()),
                ));
            }
            if values.iter().any(|&e| !(e > 0.0)) {
                return Err(Error::config("eta", "coefficients must be positive"));
            }
            let sum: f64 = values.iter().sum();
            if sum > 1.0 + 1e-12 {
                return Err(Error::config("eta", format!("coefficients sum to {sum} > 1")));
            }
        }
        if self.v_b2i.len() != k || self.v_i2u.len() != k || self.v_i2u.iter().any(|r| r.len() != k)
        {
            return Err(Error::config("v_b2i", "Rician tables must be K (and K x K)"));
        }
        for v in self
            .v_b2i
            .iter()
            .chain(self.v_i2u.iter().flatten())
        {
            if let RicianK::Finite(x) = v {
                if !(*x >= 0.0) || !x.is_finite() {
                    return Err(Error::config("v_b2i", "Rician factors must be >= 0 or inf"));
                }
            }
        }
        let mut seen = vec![false; k];
        if self.assignment.len() != k {
            return Err(Error::config(
                "assignment",
                format!("expected {} entries, found {}", k, self.assignment.len()),
            ));
        }
        for &m in &self.assignment {
            if m >= k || seen[m] {
                return Err(Error::config(
                    "assignment",
                    "must be a permutation of 1..=k",
                ));
            }
            seen[m] = true;
        }
        Ok(())
    }

    /// Resolve the derived per-link quantities every evaluator consumes.
    pub fn tables(&self) -> Result<ScenarioTables> {
        self.validate()?;
        let k = self.k_users;
        let mut angles = Vec::with_capacity(k);
        let mut fading_b2i = Vec::with_capacity(k);
        for (m, irs) in self.irs.iter().enumerate() {
            angles.push(bs_irs_angles(self.bs, *irs)?);
            let d = self.bs.distance(irs);
            fading_b2i.push(FadingParams {
                alpha: path_loss(d, self.c0_db, self.kappa_b2i)?,
                rician_k: self.v_b2i[m],
            });
        }
        let mut geo = Vec::with_capacity(k);
        let mut fading_i2u = Vec::with_capacity(k);
        for (m, irs) in self.irs.iter().enumerate() {
            let mut row_geo = Vec::with_capacity(k);
            let mut row_fad = Vec::with_capacity(k);
            for (u, user) in self.users_est.iter().enumerate() {
                let g = link_geometry(*irs, *user)?;
                row_fad.push(FadingParams {
                    alpha: path_loss(g.d_hat, self.c0_db, self.kappa_i2u)?,
                    rician_k: self.v_i2u[m][u],
                });
                row_geo.push(g);
            }
            geo.push(row_geo);
            fading_i2u.push(row_fad);
        }
        let mut user_of_irs = vec![0usize; k];
        for (user, &irs) in self.assignment.iter().enumerate() {
            user_of_irs[irs] = user;
        }
        Ok(ScenarioTables {
            num_users: k,
            n_antennas: self.n_antennas,
            m_elements: self.m_elements,
            upsilon: self.upsilon,
            rho_d: self.rho_d_watts(),
            noise: self.noise_watts(),
            eta: self.eta.values(k),
            angles,
            geo,
            fading_b2i,
            fading_i2u,
            irs_of_user: self.assignment.clone(),
            user_of_irs,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config(path.display().to_string(), format!("cannot read file: {e}"))
        })?;
        load_scenario(&text)
    }
}

/// Everything the rate, Monte Carlo, and power-control evaluators need,
/// resolved once per scenario.
#[derive(Debug, Clone)]
pub struct ScenarioTables {
    pub num_users: usize,
    pub n_antennas: usize,
    pub m_elements: usize,
    pub upsilon: f64,
    /// Total BS power, watts.
    pub rho_d: f64,
    /// Noise power, watts.
    pub noise: f64,
    pub eta: Vec<f64>,
    pub angles: Vec<BsIrsAngles>,
    /// Estimated link geometry, indexed [irs][user].
    pub geo: Vec<Vec<LinkGeometry>>,
    pub fading_b2i: Vec<FadingParams>,
    /// Indexed [irs][user].
    pub fading_i2u: Vec<Vec<FadingParams>>,
    /// IRS serving each user.
    pub irs_of_user: Vec<usize>,
    /// User served by each IRS.
    pub user_of_irs: Vec<usize>,
}

// ── Document parser ─────────────────────────────────────────────────────────

struct Entry {
    key: String,
    value: String,
    taken: bool,
}

struct Document {
    entries: Vec<Entry>,
}

impl Document {
    fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<Entry> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some(eq) = line.find('=') else {
                return Err(Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                ));
            };
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() {
                return Err(Error::config(format!("line {}", lineno + 1), "empty key"));
            }
            if entries.iter().any(|e| e.key == key) {
                return Err(Error::config(key, "duplicate key"));
            }
            entries.push(Entry {
                key,
                value,
                taken: false,
            });
        }
        Ok(Document { entries })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        for e in &mut self.entries {
            if e.key == key {
                e.taken = true;
                return Some(e.value.clone());
            }
        }
        None
    }

    /// Take every `prefix.<index>` entry; indices must be 1..=count with no
    /// gaps or duplicates.
    fn take_indexed(&mut self, prefix: &str) -> Result<Option<Vec<String>>> {
        let mut found: Vec<(usize, String)> = Vec::new();
        let dot = format!("{prefix}.");
        for e in &mut self.entries {
            if let Some(rest) = e.key.strip_prefix(&dot) {
                if let Ok(idx) = rest.parse::<usize>() {
                    e.taken = true;
                    found.push((idx, e.value.clone()));
                }
            }
        }
        if found.is_empty() {
            return Ok(None);
        }
        found.sort_by_key(|(i, _)| *i);
        for (pos, (idx, _)) in found.iter().enumerate() {
            if *idx != pos + 1 {
                return Err(Error::config(
                    format!("{prefix}.{idx}"),
                    format!("indices must run 1..={} without gaps", found.len()),
                ));
            }
        }
        Ok(Some(found.into_iter().map(|(_, v)| v).collect()))
    }

    /// Take dotted overrides `prefix.<i>` or `prefix.<i>.<j>` as raw index
    /// paths, for sparse per-link overrides.
    fn take_overrides(&mut self, prefix: &str) -> Vec<(Vec<usize>, String, String)> {
        let mut found = Vec::new();
        let dot = format!("{prefix}.");
        for e in &mut self.entries {
            if let Some(rest) = e.key.strip_prefix(&dot) {
                let idx: Option<Vec<usize>> =
                    rest.split('.').map(|p| p.parse::<usize>().ok()).collect();
                if let Some(idx) = idx {
                    e.taken = true;
                    found.push((idx, e.value.clone(), e.key.clone()));
                }
            }
        }
        found
    }

    fn finish(&self) -> Result<()> {
        if let Some(e) = self.entries.iter().find(|e| !e.taken) {
            return Err(Error::config(&e.key, "unknown key"));
        }
        Ok(())
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::config(key, format!("expected a number, got `{value}`")))?;
    if v.is_nan() {
        return Err(Error::config(key, "NaN is not a valid value"));
    }
    Ok(v)
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("expected a non-negative integer, got `{value}`")))
}

fn parse_rician(key: &str, value: &str) -> Result<RicianK> {
    if value.eq_ignore_ascii_case("inf") || value.eq_ignore_ascii_case("infinite") {
        return Ok(RicianK::Infinite);
    }
    Ok(RicianK::Finite(parse_f64(key, value)?))
}

fn split_numbers(key: &str, value: &str, arity: Option<usize>) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    if let Some(n) = arity {
        if parts.len() != n {
            return Err(Error::config(
                key,
                format!("expected {n} numbers, found {}", parts.len()),
            ));
        }
    }
    parts.iter().map(|p| parse_f64(key, p)).collect()
}

fn parse_position(key: &str, value: &str) -> Result<Position3> {
    let v = split_numbers(key, value, Some(3))?;
    Ok(Position3::new(v[0], v[1], v[2]))
}

/// Parse a scenario document. Omitted keys take the reference-deployment
/// defaults; an empty document is exactly that deployment.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig> {
    let mut doc = Document::parse(text)?;
    let mut sc = ScenarioConfig::table1();

    if let Some(v) = doc.take("k") {
        sc.k_users = parse_usize("k", &v)?;
    }
    if let Some(v) = doc.take("n") {
        sc.n_antennas = parse_usize("n", &v)?;
    }
    if let Some(v) = doc.take("m") {
        sc.m_elements = parse_usize("m", &v)?;
    }
    if let Some(v) = doc.take("upsilon") {
        sc.upsilon = parse_f64("upsilon", &v)?;
    }
    if let Some(v) = doc.take("rho_d_dbm") {
        sc.rho_d_dbm = parse_f64("rho_d_dbm", &v)?;
    }
    if let Some(v) = doc.take("rho_d_cap_dbm") {
        sc.rho_d_cap_dbm = Some(parse_f64("rho_d_cap_dbm", &v)?);
    }
    if let Some(v) = doc.take("c0_db") {
        sc.c0_db = parse_f64("c0_db", &v)?;
    }
    if let Some(v) = doc.take("kappa_b2i") {
        sc.kappa_b2i = parse_f64("kappa_b2i", &v)?;
    }
    if let Some(v) = doc.take("kappa_i2u") {
        sc.kappa_i2u = parse_f64("kappa_i2u", &v)?;
    }
    if let Some(v) = doc.take("bandwidth_hz") {
        sc.bandwidth_hz = parse_f64("bandwidth_hz", &v)?;
    }
    if let Some(v) = doc.take("noise_psd_dbm_hz") {
        sc.noise_psd_dbm_hz = parse_f64("noise_psd_dbm_hz", &v)?;
    }
    if let Some(v) = doc.take("seed") {
        sc.seed = v
            .parse()
            .map_err(|_| Error::config("seed", format!("expected a 64-bit integer, got `{v}`")))?;
    }
    if let Some(v) = doc.take("bs") {
        sc.bs = parse_position("bs", &v)?;
    }
    if let Some(values) = doc.take_indexed("irs")? {
        sc.irs = values
            .iter()
            .enumerate()
            .map(|(i, v)| parse_position(&format!("irs.{}", i + 1), v))
            .collect::<Result<_>>()?;
    }
    if let Some(values) = doc.take_indexed("user")? {
        sc.users_est = values
            .iter()
            .enumerate()
            .map(|(i, v)| parse_position(&format!("user.{}", i + 1), v))
            .collect::<Result<_>>()?;
    }
    let k = sc.k_users;
    if let Some(v) = doc.take("eta") {
        sc.eta = if v.eq_ignore_ascii_case("uniform") {
            Eta::Uniform
        } else {
            Eta::Explicit(split_numbers("eta", &v, None)?)
        };
    }
    // Scalar Rician keys fill whole tables; dotted keys then override
    // individual links regardless of their order in the document.
    if let Some(v) = doc.take("v_b2i") {
        sc.v_b2i = vec![parse_rician("v_b2i", &v)?; k];
    } else if sc.v_b2i.len() != k {
        sc.v_b2i = vec![RicianK::Finite(5.0); k];
    }
    if let Some(v) = doc.take("v_i2u") {
        sc.v_i2u = vec![vec![parse_rician("v_i2u", &v)?; k]; k];
    } else if sc.v_i2u.len() != k || sc.v_i2u.iter().any(|r| r.len() != k) {
        sc.v_i2u = vec![vec![RicianK::Finite(5.0); k]; k];
    }
    for (idx, value, key) in doc.take_overrides("v_b2i") {
        if idx.len() != 1 || idx[0] == 0 || idx[0] > k {
            return Err(Error::config(key, format!("expected `v_b2i.<1..={k}>`")));
        }
        sc.v_b2i[idx[0] - 1] = parse_rician(&key, &value)?;
    }
    for (idx, value, key) in doc.take_overrides("v_i2u") {
        if idx.len() != 2 || idx[0] == 0 || idx[0] > k || idx[1] == 0 || idx[1] > k {
            return Err(Error::config(
                key,
                format!("expected `v_i2u.<irs 1..={k}>.<user 1..={k}>`"),
            ));
        }
        sc.v_i2u[idx[0] - 1][idx[1] - 1] = parse_rician(&key, &value)?;
    }
    if let Some(v) = doc.take("assignment") {
        let nums = split_numbers("assignment", &v, Some(k))?;
        sc.assignment = nums
            .iter()
            .map(|&x| {
                if x.fract() != 0.0 || x < 1.0 {
                    Err(Error::config("assignment", "entries must be 1-based integers"))
                } else {
                    Ok(x as usize - 1)
                }
            })
            .collect::<Result<_>>()?;
    } else if sc.assignment.len() != k {
        sc.assignment = (0..k).collect();
    }

    doc.finish()?;
    sc.validate()?;
    Ok(sc)
}
