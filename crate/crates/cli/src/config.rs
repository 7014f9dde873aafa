//! Plain-text key=value configuration.
//!
//! One `key = value` per line, `#` starts a comment, blank lines are
//! skipped. Parsing is strict: unknown keys, duplicate keys and
//! malformed values all fail with the offending line number instead of
//! being silently ignored.

use anyhow::bail;
use occu_core::control::{WindowConfig, WorldTarget};
use occu_core::field::FieldParams;
use occu_core::occupancy::{CanonicalOccupancyConfig, SampleMode};
use occu_core::Vec3;
use std::fs;
use std::path::Path;

struct Entry {
    line: usize,
    key: String,
    value: String,
    used: bool,
}

/// Tokenized config file. Typed accessors mark entries as used;
/// [`Parser::finish`] rejects whatever is left over.
struct Parser {
    origin: String,
    entries: Vec<Entry>,
}

impl Parser {
    fn new(text: &str, origin: &str) -> anyhow::Result<Parser> {
        let mut entries: Vec<Entry> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if content.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                bail!("{origin}:{line}: expected `key = value`, got `{}`", content.trim());
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                bail!("{origin}:{line}: missing key before `=`");
            }
            if let Some(dup) = entries.iter().find(|e| e.key == key) {
                bail!(
                    "{origin}:{line}: duplicate key `{key}` (first set on line {})",
                    dup.line
                );
            }
            entries.push(Entry {
                line,
                key,
                value,
                used: false,
            });
        }
        Ok(Parser {
            origin: origin.to_string(),
            entries,
        })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        let e = self.entries.iter_mut().find(|e| e.key == key)?;
        e.used = true;
        Some((e.line, e.value.clone()))
    }

    fn bad(&self, line: usize, key: &str, value: &str, want: &str) -> anyhow::Error {
        anyhow::anyhow!(
            "{}:{line}: `{key} = {value}`: expected {want}",
            self.origin
        )
    }

    fn take_f64(&mut self, key: &str) -> anyhow::Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Some(x)),
                _ => Err(self.bad(line, key, &v, "a finite number")),
            },
        }
    }

    fn take_usize(&mut self, key: &str) -> anyhow::Result<Option<usize>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| self.bad(line, key, &v, "a non-negative integer")),
        }
    }

    fn take_u64(&mut self, key: &str) -> anyhow::Result<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| self.bad(line, key, &v, "a non-negative integer")),
        }
    }

    fn take_bool(&mut self, key: &str) -> anyhow::Result<Option<bool>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => match v.as_str() {
                "true" | "on" | "yes" | "1" => Ok(Some(true)),
                "false" | "off" | "no" | "0" => Ok(Some(false)),
                _ => Err(self.bad(line, key, &v, "true or false")),
            },
        }
    }

    fn take_string(&mut self, key: &str) -> Option<String> {
        self.take(key).map(|(_, v)| v)
    }

    fn take_vec3(&mut self, key: &str) -> anyhow::Result<Option<Vec3>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => parse_vec3(&v)
                .map(Some)
                .ok_or_else(|| self.bad(line, key, &v, "three numbers `x,y,z`")),
        }
    }

    /// All not-yet-used entries whose key starts with `prefix`.
    fn take_prefixed(&mut self, prefix: &str) -> Vec<(usize, String, String)> {
        let mut out = Vec::new();
        for e in &mut self.entries {
            if !e.used && e.key.starts_with(prefix) {
                e.used = true;
                out.push((e.line, e.key.clone(), e.value.clone()));
            }
        }
        out
    }

    fn finish(self) -> anyhow::Result<()> {
        if let Some(e) = self.entries.iter().find(|e| !e.used) {
            bail!("{}:{}: unknown key `{}`", self.origin, e.line, e.key);
        }
        Ok(())
    }
}

fn parse_vec3(text: &str) -> Option<Vec3> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .ok()?;
    if parts.len() != 3 || parts.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(Vec3::new(parts[0], parts[1], parts[2]))
}

/// Tool-wide tunables shared by every command (`--config`). All keys are
/// optional; the defaults match the built-in pipeline parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ToolConfig {
    /// Voxel edge length for motion voxelization, meters.
    pub unit: f64,
    /// Free voxel layers padded around the motion's bounding box.
    pub margin_cells: usize,
    /// Surface sample spacing override; `None` derives it from `unit`.
    pub sample_spacing: Option<f64>,
    /// Worker threads for batch commands; 0 uses all cores.
    pub threads: usize,
    pub seed: u64,
    pub field: FieldParams,
    pub cube: CanonicalOccupancyConfig,
    pub window: WindowConfig,
    pub regulation: bool,
    pub regulate_all: bool,
}

impl Default for ToolConfig {
    fn default() -> Self {
        ToolConfig {
            unit: 0.08,
            margin_cells: 1,
            sample_spacing: None,
            threads: 0,
            seed: 0,
            field: FieldParams::default(),
            cube: CanonicalOccupancyConfig::default(),
            window: WindowConfig::default(),
            regulation: true,
            regulate_all: false,
        }
    }
}

impl ToolConfig {
    pub fn parse(text: &str, origin: &str) -> anyhow::Result<ToolConfig> {
        let mut p = Parser::new(text, origin)?;
        let mut c = ToolConfig::default();
        if let Some(v) = p.take_f64("unit")? {
            if v <= 0.0 {
                bail!("{origin}: unit must be positive, got {v}");
            }
            c.unit = v;
        }
        if let Some(v) = p.take_usize("margin_cells")? {
            c.margin_cells = v;
        }
        if let Some(v) = p.take_f64("sample_spacing")? {
            if v <= 0.0 {
                bail!("{origin}: sample_spacing must be positive, got {v}");
            }
            c.sample_spacing = Some(v);
        }
        if let Some(v) = p.take_usize("threads")? {
            c.threads = v;
        }
        if let Some(v) = p.take_u64("seed")? {
            c.seed = v;
        }
        if let Some(v) = p.take_bool("regulation")? {
            c.regulation = v;
        }
        if let Some(v) = p.take_bool("regulate_all")? {
            c.regulate_all = v;
        }
        if let Some(v) = p.take_f64("field.gain")? {
            c.field.gain = v;
        }
        if let Some(v) = p.take_f64("field.inner_radius")? {
            c.field.inner_radius = v;
        }
        if let Some(v) = p.take_f64("field.bias")? {
            c.field.bias = v;
        }
        if let Some(v) = p.take_f64("field.max_scale")? {
            c.field.max_scale = v;
        }
        if let Some(v) = p.take_f64("field.norm_order")? {
            c.field.norm_order = v;
        }
        if let Some(v) = p.take_usize("cube.side")? {
            if v == 0 {
                bail!("{origin}: cube.side must be at least 1");
            }
            c.cube.side = v;
        }
        if let Some(v) = p.take_f64("cube.unit")? {
            if v <= 0.0 {
                bail!("{origin}: cube.unit must be positive, got {v}");
            }
            c.cube.unit = v;
        }
        if let Some((line, v)) = p.take("cube.mode") {
            c.cube.mode = match v.as_str() {
                "center" => SampleMode::Center,
                "conservative" => SampleMode::Conservative,
                _ => return Err(p.bad(line, "cube.mode", &v, "`center` or `conservative`")),
            };
        }
        if let Some(v) = p.take_usize("window.history")? {
            c.window.history = v;
        }
        if let Some(v) = p.take_usize("window.future")? {
            c.window.future = v;
        }
        if let Some(v) = p.take_f64("window.rate")? {
            if v <= 0.0 {
                bail!("{origin}: window.rate must be positive, got {v}");
            }
            c.window.rate = v;
        }
        p.finish()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> anyhow::Result<ToolConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
        ToolConfig::parse(&text, &path.display().to_string())
    }
}

/// One rollout scenario for `occu run`: scene, start state, goal
/// schedule and duration.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeConfig {
    pub duration: f64,
    pub seed: u64,
    /// Scene spec string, see the `scene` module for the grammar.
    pub provider: String,
    /// Root start position (the rest pose is planted here).
    pub start: Vec3,
    /// Initial facing, radians about +Z.
    pub start_yaw: f64,
    /// Overrides the tool-wide regulation switch when set.
    pub regulation: Option<bool>,
    /// Goal keyframes, unordered; `None` clears the goal.
    pub keys: Vec<(f64, Option<WorldTarget>)>,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig {
            duration: 10.0,
            seed: 0,
            provider: "empty".to_string(),
            start: Vec3::new(0.0, 0.0, 0.9),
            start_yaw: 0.0,
            regulation: None,
            keys: Vec::new(),
        }
    }
}

/// Goal slots accepted in a `target.N` line, matching the five points a
/// target pins: root and the four end effectors.
const TARGET_SLOTS: [&str; 5] = ["root", "lhand", "rhand", "lfoot", "rfoot"];

fn parse_target_line(value: &str) -> Result<(f64, Option<WorldTarget>), String> {
    let mut time: Option<f64> = None;
    let mut clear = false;
    let mut points = [Vec3::zeros(); 5];
    let mut mask = [false; 5];
    for token in value.split_whitespace() {
        if token == "none" {
            clear = true;
            continue;
        }
        let Some((k, v)) = token.split_once('=') else {
            return Err(format!("bad token `{token}`"));
        };
        if k == "time" {
            let t: f64 = v
                .parse()
                .map_err(|_| format!("bad time `{v}`"))?;
            time = Some(t);
            continue;
        }
        let Some(slot) = TARGET_SLOTS.iter().position(|s| *s == k) else {
            return Err(format!(
                "unknown slot `{k}` (expected time, none, root, lhand, rhand, lfoot, rfoot)"
            ));
        };
        points[slot] =
            parse_vec3(v).ok_or_else(|| format!("`{k}` needs three numbers `x,y,z`"))?;
        mask[slot] = true;
    }
    let time = time.ok_or_else(|| "missing `time=`".to_string())?;
    if clear {
        if mask.iter().any(|&m| m) {
            return Err("`none` cannot be combined with target points".to_string());
        }
        return Ok((time, None));
    }
    if !mask.iter().any(|&m| m) {
        return Err("no target points given (or use `none`)".to_string());
    }
    Ok((time, Some(WorldTarget { points, mask })))
}

impl EpisodeConfig {
    pub fn parse(text: &str, origin: &str) -> anyhow::Result<EpisodeConfig> {
        let mut p = Parser::new(text, origin)?;
        let mut c = EpisodeConfig::default();
        if let Some(v) = p.take_f64("duration")? {
            if v <= 0.0 {
                bail!("{origin}: duration must be positive, got {v}");
            }
            c.duration = v;
        }
        if let Some(v) = p.take_u64("seed")? {
            c.seed = v;
        }
        if let Some(v) = p.take_string("provider") {
            c.provider = v;
        }
        if let Some(v) = p.take_vec3("start")? {
            c.start = v;
        }
        if let Some(v) = p.take_f64("start_yaw")? {
            c.start_yaw = v;
        }
        if let Some(v) = p.take_bool("regulation")? {
            c.regulation = Some(v);
        }
        // `target = x,y,z` is shorthand for a root goal from t = 0
        if let Some(v) = p.take_vec3("target")? {
            c.keys.push((0.0, Some(WorldTarget::root_at(v))));
        }
        for (line, key, value) in p.take_prefixed("target.") {
            let tail = &key["target.".len()..];
            if tail.is_empty() || !tail.bytes().all(|b| b.is_ascii_digit()) {
                bail!("{origin}:{line}: unknown key `{key}`");
            }
            let parsed = parse_target_line(&value)
                .map_err(|msg| anyhow::anyhow!("{origin}:{line}: `{key}`: {msg}"))?;
            c.keys.push(parsed);
        }
        p.finish()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> anyhow::Result<EpisodeConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
        EpisodeConfig::parse(&text, &path.display().to_string())
    }
}
