//! CSV serialization. Floats are written with 17 significant digits so a
//! round trip reproduces them exactly; seeds go in a leading `#` comment line.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sampler::{SampleMultiset, SampleSet, SpherePoint};
use crate::spectral::{ravel, sphere_index, GridField, SpectralDomain, SpectralVector, C64};
use crate::sphere::SphericalSignal;

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(input)
}

fn parse<T: std::str::FromStr>(field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Data(format!("cannot parse {what} from {field:?}")))
}

fn coordinate_header(prefix: &str, dims: usize) -> Vec<String> {
    (1..=dims).map(|i| format!("{prefix}{i}")).collect()
}

/// Reads a `# seed=<u64>` comment line, if present.
pub fn read_seed(text: &str) -> Option<u64> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("seed=").and_then(|s| s.trim().parse().ok()))
}

/// `x1,...,xd,re,im`.
pub fn write_grid_field<W: Write>(field: &GridField, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = coordinate_header("x", field.dims());
    header.extend(["re".into(), "im".into()]);
    w.write_record(&header)?;
    for (i, v) in field.values().iter().enumerate() {
        let mut rec: Vec<String> = field.point(i).iter().map(|c| c.to_string()).collect();
        rec.extend([float(v.re), float(v.im)]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid_field<R: Read>(input: R) -> Result<GridField> {
    let mut r = reader(input);
    let dims = r.headers()?.len().checked_sub(2).filter(|&d| d >= 1).ok_or_else(|| {
        Error::Data("grid field header needs x1,...,xd,re,im".into())
    })?;
    let mut entries = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let point: Vec<usize> = (0..dims).map(|k| parse(&rec[k], "coordinate")).collect::<Result<_>>()?;
        let v = C64::new(parse(&rec[dims], "re")?, parse(&rec[dims + 1], "im")?);
        entries.push((point, v));
    }
    let side = side_from_count(entries.len(), dims)?;
    let mut values = vec![C64::new(0.0, 0.0); entries.len()];
    for (p, v) in entries {
        if p.iter().any(|&c| c >= side) {
            return Err(Error::Structural(format!("coordinate outside ℤ_{side}")));
        }
        values[ravel(&p, side)] = v;
    }
    GridField::new(dims, side, values)
}

fn side_from_count(count: usize, dims: usize) -> Result<usize> {
    let side = (count as f64).powf(1.0 / dims as f64).round() as usize;
    if side.checked_pow(dims as u32) != Some(count) {
        return Err(Error::Structural(format!("{count} rows do not fill a {dims}-dimensional grid")));
    }
    Ok(side)
}

/// `m1,...,md,re,im` on the torus, `l,m,re,im` on the sphere.
pub fn write_spectral_vector<W: Write>(spec: &SpectralVector, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = match spec.domain() {
        SpectralDomain::Torus { dims, .. } => coordinate_header("m", dims),
        SpectralDomain::Sphere { .. } => vec!["l".into(), "m".into()],
    };
    let mut header = header;
    header.extend(["re".into(), "im".into()]);
    w.write_record(&header)?;
    for (i, v) in spec.coefficients().iter().enumerate() {
        let mut rec: Vec<String> = spec.domain().label(i).iter().map(|c| c.to_string()).collect();
        rec.extend([float(v.re), float(v.im)]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_spectral_vector<R: Read>(input: R) -> Result<SpectralVector> {
    let mut r = reader(input);
    let headers = r.headers()?.clone();
    let sphere = headers.get(0) == Some("l");
    let labels = headers.len().checked_sub(2).filter(|&d| d >= 1).ok_or_else(|| {
        Error::Data("spectral header needs labels followed by re,im".into())
    })?;
    let mut entries = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let label: Vec<i64> = (0..labels).map(|k| parse(&rec[k], "label")).collect::<Result<_>>()?;
        entries.push((label, C64::new(parse(&rec[labels], "re")?, parse(&rec[labels + 1], "im")?)));
    }
    if sphere {
        let bandwidth = (entries.len() as f64).sqrt().round() as usize;
        if bandwidth == 0 || bandwidth * bandwidth != entries.len() {
            return Err(Error::Structural(format!("{} rows are not (L+1)² coefficients", entries.len())));
        }
        let bandwidth = bandwidth - 1;
        let mut values = vec![C64::new(0.0, 0.0); entries.len()];
        for (label, v) in entries {
            let (l, m) = (label[0], label[1]);
            if l < 0 || l as usize > bandwidth || m.abs() > l {
                return Err(Error::Structural(format!("(ℓ, m) = ({l}, {m}) outside V_{bandwidth}")));
            }
            values[sphere_index(l as usize, m)] = v;
        }
        SpectralVector::new(SpectralDomain::Sphere { bandwidth }, values)
    } else {
        let side = side_from_count(entries.len(), labels)?;
        let mut values = vec![C64::new(0.0, 0.0); entries.len()];
        for (label, v) in entries {
            let p: Vec<usize> = label.iter().map(|&c| c.rem_euclid(side as i64) as usize).collect();
            values[ravel(&p, side)] = v;
        }
        SpectralVector::new(SpectralDomain::Torus { dims: labels, side }, values)
    }
}

/// `l,m,value`.
pub fn write_spherical_signal<W: Write>(signal: &SphericalSignal, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["l", "m", "value"])?;
    for (i, v) in signal.coefficients().iter().enumerate() {
        let (l, m) = crate::spectral::sphere_degree_order(i);
        w.write_record([l.to_string(), m.to_string(), float(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `l,m,value` rows; absent coefficients are zero and L is the largest degree listed
/// unless `bandwidth` is given.
pub fn read_spherical_signal<R: Read>(input: R, bandwidth: Option<usize>) -> Result<SphericalSignal> {
    let mut r = reader(input);
    let mut terms = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 3 {
            return Err(Error::Data("sphere signal rows need l,m,value".into()));
        }
        let l: usize = parse(&rec[0], "l")?;
        let m: i64 = parse(&rec[1], "m")?;
        terms.push((l, m, parse::<f64>(&rec[2], "value")?));
    }
    let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let bandwidth = bandwidth.unwrap_or(top);
    SphericalSignal::from_terms(bandwidth, &terms)
}

/// `x1,...,xd` with the seed in a comment line.
pub fn write_sample_set<W: Write>(set: &SampleSet, mut out: W) -> Result<()> {
    writeln!(out, "# seed={}", set.seed())?;
    writeln!(out, "# side={}", set.side())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(coordinate_header("x", set.dims()))?;
    for p in set.points() {
        w.write_record(p.iter().map(|c| c.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sample_set<R: Read>(mut input: R, side: usize) -> Result<SampleSet> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let seed = read_seed(&text).unwrap_or(0);
    let mut r = reader(text.as_bytes());
    let dims = r.headers()?.len();
    let mut indices = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let p: Vec<usize> = rec.iter().map(|c| parse(c, "coordinate")).collect::<Result<_>>()?;
        if p.len() != dims || p.iter().any(|&c| c >= side) {
            return Err(Error::Structural(format!("sample point outside ℤ_{side}^{dims}")));
        }
        indices.push(ravel(&p, side));
    }
    SampleSet::from_indices(dims, side, indices, seed)
}

/// `theta,phi` with the seed in a comment line.
pub fn write_sample_multiset<W: Write>(set: &SampleMultiset, mut out: W) -> Result<()> {
    writeln!(out, "# seed={}", set.seed())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta", "phi"])?;
    for p in set.points() {
        w.write_record([float(p.theta), float(p.phi)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sample_multiset<R: Read>(mut input: R) -> Result<SampleMultiset> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let seed = read_seed(&text).unwrap_or(0);
    let mut r = reader(text.as_bytes());
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        points.push(SpherePoint::new(parse(&rec[0], "theta")?, parse(&rec[1], "phi")?));
    }
    Ok(SampleMultiset::from_points(points, seed))
}
