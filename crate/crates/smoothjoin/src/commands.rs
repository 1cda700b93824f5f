use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use smoothjoin_core::circumscribe::{circumscribe_pair, standard_circumscribe};
use smoothjoin_core::continuity::{assemble_smoothness_matrix, ColumnKey, SmoothnessSystem};
use smoothjoin_core::geometry::detect_shared_facet;
use smoothjoin_core::bernstein::simplotope_domain_points;
use smoothjoin_core::verify::verify_system;
use smoothjoin_core::{Error, RationalPoint};

use crate::error::CliError;
use crate::grid::GridFile;
use crate::json::{floats, from_index, index, point, ConditionSetJson, MatrixJson, ReportJson, VerifyJson, Q};

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

fn system(grid: &GridFile, order: u32) -> Result<SmoothnessSystem, CliError> {
    let patches = grid.patches()?;
    let adj = grid.adjacency_indices(&patches)?;
    Ok(assemble_smoothness_matrix(&patches, &adj, order)?)
}

/// Condition sets and the stacked matrix.
pub struct ConditionsOutput {
    pub conditions: Vec<ConditionSetJson>,
    pub matrix: MatrixJson,
}

impl ConditionsOutput {
    /// `conditions.json` and `matrix.json` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
        let c = dir.join("conditions.json");
        let m = dir.join("matrix.json");
        write(&c, &to_pretty(&self.conditions))?;
        write(&m, &to_pretty(&self.matrix))?;
        Ok(vec![c, m])
    }
}

pub fn conditions(grid: &GridFile, order: u32) -> Result<ConditionsOutput, CliError> {
    let sys = system(grid, order)?;
    Ok(ConditionsOutput {
        conditions: sys.condition_sets.iter().map(ConditionSetJson::from).collect(),
        matrix: MatrixJson::from(&sys),
    })
}

/// Replaces the generated rows by those of an external matrix.
fn replay(sys: &mut SmoothnessSystem, m: &MatrixJson) -> Result<(), CliError> {
    let columns: Vec<ColumnKey> = m.columns.iter().map(|c| ColumnKey { patch: c.patch.clone(), index: from_index(&c.index) }).collect();
    if columns != sys.columns || m.cols != columns.len() {
        return Err(CliError::Core(Error::ColumnMismatch));
    }
    let mut rows = vec![Vec::new(); m.rows];
    for (i, j, w) in &m.entries {
        if *i >= m.rows || *j >= m.cols {
            return Err(CliError::Invalid(format!("matrix entry ({i}, {j}) out of range")));
        }
        rows[*i].push((*j, w.0.clone()));
    }
    sys.rows = rows;
    Ok(())
}

pub fn verify(
    grid: &GridFile,
    order: u32,
    samples: usize,
    seed: u64,
    matrix: Option<&MatrixJson>,
) -> Result<VerifyJson, CliError> {
    let patches = grid.patches()?;
    let adj = grid.adjacency_indices(&patches)?;
    let mut sys = assemble_smoothness_matrix(&patches, &adj, order)?;
    if let Some(m) = matrix {
        replay(&mut sys, m)?;
    }
    let reports = verify_system(&patches, &sys, samples, seed)?;
    Ok(VerifyJson {
        passed: reports.iter().all(|r| r.passed),
        seed,
        replayed_matrix: matrix.is_some(),
        pairs: reports.iter().map(ReportJson::from).collect(),
    })
}

fn points_value(points: &[RationalPoint], render_float: bool) -> Value {
    let exact: Vec<Vec<Q>> = points.iter().map(point).collect();
    if render_float {
        let f: Vec<Vec<f64>> = points.iter().map(|p| floats(p.coords())).collect();
        json!({ "exact": exact, "float": f })
    } else {
        json!({ "exact": exact })
    }
}

pub fn bnet(grid: &GridFile, render_float: bool) -> Result<Value, CliError> {
    let patches = grid.patches()?;
    let mut out = Vec::new();
    for p in &patches {
        let net = simplotope_domain_points(&p.simplotope, &p.degrees)?;
        let indices: Vec<Vec<Vec<u32>>> = net.entries().iter().map(|(k, _)| index(k)).collect();
        out.push(json!({
            "id": p.id,
            "nu": p.simplotope.nu(),
            "degrees": p.degrees,
            "indices": indices,
            "points": points_value(&net.points(), render_float),
        }));
    }
    Ok(json!({ "patches": out }))
}

pub fn circumscribe(grid: &GridFile, render_float: bool) -> Result<Value, CliError> {
    let patches = grid.patches()?;
    let mut single = Vec::new();
    for p in &patches {
        let c = standard_circumscribe(&p.simplotope);
        single.push(json!({
            "id": p.id,
            "partition": c.partition(),
            "vertices": points_value(c.simplex().vertices(), render_float),
            "weights": c.weights().iter().cloned().map(Q).collect::<Vec<_>>(),
        }));
    }
    let mut pairs = Vec::new();
    for (a, b) in grid.adjacency_indices(&patches)? {
        let named = |e: Error| CliError::Core(Error::Pair {
            left: patches[a].id.clone(),
            right: patches[b].id.clone(),
            source: Box::new(e),
        });
        let info = detect_shared_facet(&patches[a].simplotope, &patches[b].simplotope)
            .map_err(named)?
            .ok_or_else(|| named(Error::NoSharedFacet))?;
        let pair = circumscribe_pair(&info).map_err(named)?;
        let (l, r) = if info.swapped { (b, a) } else { (a, b) };
        pairs.push(json!({
            "left": patches[l].id,
            "right": patches[r].id,
            "left_vertices": points_value(pair.left.simplex().vertices(), render_float),
            "right_vertices": points_value(pair.right.simplex().vertices(), render_float),
            "shared": pair.shared,
        }));
    }
    Ok(json!({ "patches": single, "pairs": pairs }))
}
