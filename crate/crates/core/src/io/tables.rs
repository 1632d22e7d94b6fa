use crate::bath::{CorrelationFunction, SpectralGrid};
use crate::constants::{omega_350, C, FS};
use crate::dynamics::EvolutionResult;
use crate::error::{Error, Result};
use crate::waveguide::DispersionTable;

pub const DISPERSION_HEADER: [&str; 5] = [
    "omega_rad_s",
    "beta_rad_m",
    "beta_prime_s_m",
    "v_g_m_s",
    "v_p_m_s",
];

/// Shortest round-trip representation, so re-reads are bit-identical.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

/// `# provenance: ...` line, header row, then records.
pub fn render_csv<I, R>(provenance: &str, header: &[&str], rows: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = format!("# provenance: {provenance}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(out)
}

fn numeric(values: impl IntoIterator<Item = f64>) -> Vec<String> {
    values.into_iter().map(fmt_f64).collect()
}

/// Cache format of a dispersion table.
pub fn dispersion_csv(table: &DispersionTable, provenance: &str) -> Result<Vec<u8>> {
    render_csv(
        provenance,
        &DISPERSION_HEADER,
        (0..table.len()).map(|i| {
            numeric([
                table.omega[i],
                table.beta[i],
                table.beta_prime[i],
                table.v_g[i],
                table.v_p[i],
            ])
        }),
    )
}

/// Columns of [`dispersion_csv`] parsed back.
pub fn read_dispersion_csv(bytes: &[u8]) -> Result<[Vec<f64>; 5]> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(bytes);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != DISPERSION_HEADER {
        return Err(Error::CorruptCache(format!("unexpected header {header:?}")));
    }
    let mut cols: [Vec<f64>; 5] = Default::default();
    for record in reader.records() {
        let record = record?;
        if record.len() != 5 {
            return Err(Error::CorruptCache(format!(
                "row with {} fields",
                record.len()
            )));
        }
        for (col, field) in cols.iter_mut().zip(record.iter()) {
            col.push(
                field
                    .parse()
                    .map_err(|_| Error::CorruptCache(format!("bad number {field:?}")))?,
            );
        }
    }
    Ok(cols)
}

/// Velocities normalized by `c`, with the bulk-medium reference `1/n1(omega)`.
pub fn velocity_csv(table: &DispersionTable, provenance: &str) -> Result<Vec<u8>> {
    let w350 = omega_350();
    render_csv(
        provenance,
        &[
            "omega_rad_s",
            "omega_over_omega350",
            "v_g_over_c",
            "v_p_over_c",
            "v_inf_over_c",
        ],
        (0..table.len()).map(|i| {
            let w = table.omega[i];
            let n1 = table.model.refractive_index(w).unwrap_or(f64::NAN);
            numeric([w, w / w350, table.v_g[i] / C, table.v_p[i] / C, 1.0 / n1])
        }),
    )
}

/// Spectral densities with the light and bulk-medium lines for reference.
pub fn spectrum_csv(spectral: &SpectralGrid, provenance: &str) -> Result<Vec<u8>> {
    let grid = spectral.grid;
    let end = spectral.support_end() + 1;
    render_csv(
        provenance,
        &["omega_rad_s", "omega_over_omega0", "S_one", "S_two"],
        (1..end).map(|i| {
            numeric([
                grid.omega(i),
                grid.omega(i) / grid.omega0(),
                spectral.s_one[i],
                spectral.s_two[i],
            ])
        }),
    )
}

/// Full transform window, `t_fs,re_F,im_F`.
pub fn correlation_csv(f: &CorrelationFunction, provenance: &str) -> Result<Vec<u8>> {
    render_csv(
        provenance,
        &["t_fs", "re_F", "im_F"],
        f.samples
            .iter()
            .enumerate()
            .map(|(k, v)| numeric([f.time(k) / FS, v.re, v.im])),
    )
}

pub fn evolution_csv(r: &EvolutionResult, provenance: &str) -> Result<Vec<u8>> {
    let (plus, minus) = (r.p_plus(), r.p_minus());
    render_csv(
        provenance,
        &[
            "t_fs", "re_c1", "im_c1", "re_c2", "im_c2", "P_plus", "P_minus",
        ],
        (0..r.len()).map(|k| {
            numeric([
                r.time(k) / FS,
                r.c1[k].re,
                r.c1[k].im,
                r.c2[k].re,
                r.c2[k].im,
                plus[k],
                minus[k],
            ])
        }),
    )
}
