//! Printed reference tables shipped with the crate as CSV.
//!
//! The `tables` command and the golden tests read the same files.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::calibrate::ReferenceTable;
use crate::error::{Error, Result};

pub const TABLE1_DENSITY_CSV: &str = include_str!("../data/table1_density.csv");
pub const TABLE1_DISCREPANCIES_CSV: &str = include_str!("../data/table1_discrepancies.csv");
pub const TABLE2_DELTA_CSV: &str = include_str!("../data/table2_delta.csv");
pub const TABLE3_MASS_CSV: &str = include_str!("../data/table3_mass.csv");
pub const TABLE4_PRESSURE_CSV: &str = include_str!("../data/table4_pressure.csv");
pub const TABLE5_TEMPERATURE_CSV: &str = include_str!("../data/table5_temperature.csv");
pub const TABLE6_PRESSURE_CSV: &str = include_str!("../data/table6_pressure.csv");

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn records<R: DeserializeOwned>(text: &str) -> Result<Vec<R>> {
    reader(text)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Data(e.to_string()))
}

/// Printed density columns at the shared ordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityTable {
    pub y: Vec<f64>,
    pub sears: Vec<f64>,
    /// `(label, values)` in the order of [`crate::density::reference_models`].
    pub models: Vec<(String, Vec<f64>)>,
}

pub fn density_table() -> Result<DensityTable> {
    let mut rdr = reader(TABLE1_DENSITY_CSV);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Data(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.len() < 3 || headers[0] != "y" || headers[1] != "sears" {
        return Err(Error::Data(
            "density table must start with columns y, sears".into(),
        ));
    }
    let mut columns = vec![Vec::new(); headers.len()];
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Data(e.to_string()))?;
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(
                field
                    .parse::<f64>()
                    .map_err(|e| Error::Data(format!("'{field}': {e}")))?,
            );
        }
    }
    let mut columns = columns.into_iter();
    let y = columns.next().unwrap_or_default();
    let sears = columns.next().unwrap_or_default();
    let models = headers[2..].iter().cloned().zip(columns).collect();
    Ok(DensityTable { y, sears, models })
}

/// The Sears (1964) density column as fitting data.
pub fn sears_density() -> Result<ReferenceTable<f64>> {
    ReferenceTable::from_csv(
        TABLE1_DENSITY_CSV.as_bytes(),
        "y",
        "sears",
        "Sears (1964) density ratio",
    )
}

/// A printed cell that is excluded from the density comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownDiscrepancy {
    pub column: String,
    pub y: f64,
    pub printed: f64,
    pub note: String,
}

pub fn density_discrepancies() -> Result<Vec<KnownDiscrepancy>> {
    records(TABLE1_DISCREPANCIES_CSV)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub gamma: u32,
    pub delta: f64,
    /// Decimals printed; sets the comparison tolerance.
    pub decimals: u32,
}

pub fn delta_table() -> Result<Vec<DeltaRow>> {
    records(TABLE2_DELTA_CSV)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassRow {
    pub y: f64,
    pub analytic: f64,
    pub sears: f64,
}

pub fn mass_table() -> Result<Vec<MassRow>> {
    records(TABLE3_MASS_CSV)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureRow {
    pub y: f64,
    pub g: f64,
    pub u: f64,
    pub g_over_u: f64,
}

pub fn pressure_table() -> Result<Vec<PressureRow>> {
    records(TABLE4_PRESSURE_CSV)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureRatioRow {
    pub row: u32,
    pub sears: f64,
    pub g_over_sqrt_u: f64,
    pub g_over_fourth_root_u: f64,
}

pub fn temperature_ratio_table() -> Result<Vec<TemperatureRatioRow>> {
    records(TABLE5_TEMPERATURE_CSV)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AltPressureRow {
    pub y: f64,
    pub g: f64,
}

pub fn alt_pressure_table() -> Result<Vec<AltPressureRow>> {
    records(TABLE6_PRESSURE_CSV)
}
