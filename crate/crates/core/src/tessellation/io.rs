//! OBJ and binary PLY export, plus readers for the same subsets.
//!
//! OBJ carries positions and faces only. PLY stores `double x y z`,
//! `uchar red green blue` and one `float` property per scalar channel; the
//! colour comes from a blue-green-red ramp over one channel.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::curvenet::Vec3;
use crate::error::{Error, Result};

use super::SurfaceMesh;

/// Maps a scalar channel to vertex colours: 0 is blue, half of `clamp` is
/// green, `clamp` and above is pure red.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorRamp {
    pub channel: String,
    pub clamp: f64,
}

impl ColorRamp {
    pub fn new(channel: impl Into<String>, clamp: f64) -> Self {
        ColorRamp {
            channel: channel.into(),
            clamp,
        }
    }

    pub fn color(&self, value: f64) -> [u8; 3] {
        let t = if self.clamp > 0.0 {
            (value.abs() / self.clamp).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let byte = |x: f64| (x * 255.0).round() as u8;
        if t < 0.5 {
            [0, byte(2.0 * t), byte(1.0 - 2.0 * t)]
        } else {
            [byte(2.0 * t - 1.0), byte(2.0 - 2.0 * t), 0]
        }
    }
}

const UNCOLORED: [u8; 3] = [200, 200, 200];

#[derive(Clone, Debug, PartialEq)]
pub enum MeshFormat {
    Obj,
    Ply(Option<ColorRamp>),
}

impl MeshFormat {
    /// Format from a file extension (`obj` or `ply`).
    pub fn from_path(path: &Path, ramp: Option<ColorRamp>) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(e) if e == "obj" => Ok(MeshFormat::Obj),
            Some(e) if e == "ply" => Ok(MeshFormat::Ply(ramp)),
            _ => Err(Error::MeshFormat(format!(
                "cannot infer mesh format from {}",
                path.display()
            ))),
        }
    }
}

pub fn write_obj(mesh: &SurfaceMesh, mut out: impl Write) -> std::io::Result<()> {
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    out.flush()
}

pub fn write_ply(mesh: &SurfaceMesh, ramp: Option<&ColorRamp>, mut out: impl Write) -> Result<()> {
    let colours = match ramp {
        Some(ramp) => {
            let values = mesh.scalars.get(&ramp.channel).ok_or_else(|| {
                Error::MeshFormat(format!("no scalar channel named {:?}", ramp.channel))
            })?;
            values.iter().map(|&v| ramp.color(v)).collect()
        }
        None => vec![UNCOLORED; mesh.vertices.len()],
    };
    for values in mesh.scalars.values() {
        if values.len() != mesh.vertices.len() {
            return Err(Error::MeshFormat("scalar channel length mismatch".into()));
        }
    }
    let io = |e| Error::MeshFormat(format!("write failed: {e}"));

    let mut header = String::from("ply\nformat binary_little_endian 1.0\n");
    header += &format!("element vertex {}\n", mesh.vertices.len());
    header += "property double x\nproperty double y\nproperty double z\n";
    header += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    for name in mesh.scalars.keys() {
        header += &format!("property float {name}\n");
    }
    header += &format!("element face {}\n", mesh.triangles.len());
    header += "property list uchar int vertex_indices\nend_header\n";
    out.write_all(header.as_bytes()).map_err(io)?;

    let mut buf = Vec::with_capacity(mesh.vertices.len() * (27 + 4 * mesh.scalars.len()));
    for (k, v) in mesh.vertices.iter().enumerate() {
        for c in v.iter() {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        buf.extend_from_slice(&colours[k]);
        for values in mesh.scalars.values() {
            buf.extend_from_slice(&(values[k] as f32).to_le_bytes());
        }
    }
    for t in &mesh.triangles {
        buf.push(3);
        for &k in t {
            buf.extend_from_slice(&(k as i32).to_le_bytes());
        }
    }
    out.write_all(&buf).map_err(io)?;
    out.flush().map_err(io)
}

/// Writes `mesh` to `path`.
pub fn write_mesh(mesh: &SurfaceMesh, format: &MeshFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let out = BufWriter::new(file);
    match format {
        MeshFormat::Obj => write_obj(mesh, out).map_err(|e| Error::io(path, e)),
        MeshFormat::Ply(ramp) => write_ply(mesh, ramp.as_ref(), out),
    }
}

/// Reads `v` and triangular `f` records; other records are ignored.
pub fn read_obj(input: impl Read) -> Result<SurfaceMesh> {
    let mut mesh = SurfaceMesh::default();
    for line in BufReader::new(input).lines() {
        let line = line.map_err(|e| Error::MeshFormat(e.to_string()))?;
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let c: Vec<f64> = fields
                    .take(3)
                    .map(|x| x.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::MeshFormat(format!("bad vertex: {e}")))?;
                if c.len() != 3 {
                    return Err(Error::MeshFormat(format!("bad vertex line {line:?}")));
                }
                mesh.vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<u32> = fields
                    .map(|x| {
                        x.split('/')
                            .next()
                            .and_then(|i| i.parse::<u32>().ok())
                            .filter(|&i| i > 0)
                            .map(|i| i - 1)
                    })
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::MeshFormat(format!("bad face line {line:?}")))?;
                if idx.len() != 3 {
                    return Err(Error::MeshFormat("only triangles are supported".into()));
                }
                mesh.triangles.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

#[derive(Clone, Copy)]
enum Scalar {
    U8,
    I32,
    F32,
    F64,
}

impl Scalar {
    fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "uchar" | "uint8" => Scalar::U8,
            "int" | "int32" => Scalar::I32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return Err(Error::MeshFormat(format!("unsupported PLY type {name}"))),
        })
    }

    fn read(self, input: &mut impl Read) -> Result<f64> {
        let err = |e: std::io::Error| Error::MeshFormat(format!("truncated PLY body: {e}"));
        Ok(match self {
            Scalar::U8 => {
                let mut b = [0u8; 1];
                input.read_exact(&mut b).map_err(err)?;
                b[0] as f64
            }
            Scalar::I32 => {
                let mut b = [0u8; 4];
                input.read_exact(&mut b).map_err(err)?;
                i32::from_le_bytes(b) as f64
            }
            Scalar::F32 => {
                let mut b = [0u8; 4];
                input.read_exact(&mut b).map_err(err)?;
                f32::from_le_bytes(b) as f64
            }
            Scalar::F64 => {
                let mut b = [0u8; 8];
                input.read_exact(&mut b).map_err(err)?;
                f64::from_le_bytes(b)
            }
        })
    }
}

/// Reads binary little-endian PLY as written by [`write_ply`]. Colours
/// are dropped; float and double properties other than the position
/// become scalar channels.
pub fn read_ply(input: impl Read) -> Result<SurfaceMesh> {
    let mut input = BufReader::new(input);
    let mut vertex_count = 0;
    let mut face_count = 0;
    let mut vertex_props: Vec<(String, Scalar)> = Vec::new();
    let mut face_list: Option<(Scalar, Scalar)> = None;
    let mut current = "";
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line).map_err(|e| Error::MeshFormat(e.to_string()))? == 0 {
            return Err(Error::MeshFormat("missing end_header".into()));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["ply"] | ["comment", ..] => {}
            ["format", "binary_little_endian", _] => {}
            ["format", other, _] => {
                return Err(Error::MeshFormat(format!("unsupported PLY format {other}")))
            }
            ["element", "vertex", count] => {
                current = "vertex";
                vertex_count = count.parse().map_err(|_| Error::MeshFormat("bad count".into()))?;
            }
            ["element", "face", count] => {
                current = "face";
                face_count = count.parse().map_err(|_| Error::MeshFormat("bad count".into()))?;
            }
            ["property", "list", count, index, _] if current == "face" => {
                face_list = Some((Scalar::parse(count)?, Scalar::parse(index)?));
            }
            ["property", ty, name] if current == "vertex" => {
                vertex_props.push((name.to_string(), Scalar::parse(ty)?));
            }
            ["end_header"] => break,
            _ => return Err(Error::MeshFormat(format!("unexpected header line {line:?}"))),
        }
    }

    let mut mesh = SurfaceMesh::default();
    let channels: Vec<&str> = vertex_props
        .iter()
        .filter(|(name, ty)| {
            !matches!(name.as_str(), "x" | "y" | "z") && matches!(ty, Scalar::F32 | Scalar::F64)
        })
        .map(|(name, _)| name.as_str())
        .collect();
    for name in &channels {
        mesh.scalars.insert(name.to_string(), Vec::with_capacity(vertex_count));
    }
    for _ in 0..vertex_count {
        let mut p = Vec3::zeros();
        for (name, ty) in &vertex_props {
            let value = ty.read(&mut input)?;
            match name.as_str() {
                "x" => p.x = value,
                "y" => p.y = value,
                "z" => p.z = value,
                other => {
                    if let Some(ch) = mesh.scalars.get_mut(other) {
                        ch.push(value);
                    }
                }
            }
        }
        mesh.vertices.push(p);
    }
    let (count_ty, index_ty) =
        face_list.ok_or_else(|| Error::MeshFormat("missing face list property".into()))?;
    for _ in 0..face_count {
        if count_ty.read(&mut input)? as usize != 3 {
            return Err(Error::MeshFormat("only triangles are supported".into()));
        }
        let mut t = [0u32; 3];
        for k in &mut t {
            *k = index_ty.read(&mut input)? as u32;
        }
        mesh.triangles.push(t);
    }
    Ok(mesh)
}
