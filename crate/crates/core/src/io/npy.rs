//! Minimal NPY container codec for 4-D float tensors.
//!
//! Reads versions 1.0 and 2.0 with `f4`/`f8` payloads in either byte order and
//! either memory order. Always writes version 1.0, little-endian `f8`, C order.

use std::fs;
use std::path::Path;

use crate::error::{Result, SeisError};
use crate::tensor::{ActivationTensor, Dims};

const MAGIC: &[u8; 6] = b"\x93NUMPY";
/// Total header length (preamble included) is padded to this multiple.
const HEADER_ALIGN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Endian {
    Little,
    Big,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Float {
    F32,
    F64,
}

impl Float {
    fn size(self) -> usize {
        match self {
            Float::F32 => 4,
            Float::F64 => 8,
        }
    }
}

#[derive(Debug, PartialEq)]
struct Header {
    endian: Endian,
    float: Float,
    fortran_order: bool,
    shape: Vec<usize>,
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<ActivationTensor> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| SeisError::io(path, e))?;
    decode(&bytes)
}

pub fn write_tensor(t: &ActivationTensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(t)).map_err(|e| SeisError::io(path, e))
}

/// Serializes a tensor as an NPY v1.0 `<f8` C-ordered container.
pub fn encode(t: &ActivationTensor) -> Vec<u8> {
    let [b, c, h, w] = t.dims().as_array();
    let dict = format!("{{'descr': '<f8', 'fortran_order': False, 'shape': ({b}, {c}, {h}, {w}), }}");
    // magic + version + u16 length + dict + '\n'
    let unpadded = MAGIC.len() + 2 + 2 + dict.len() + 1;
    let padding = (HEADER_ALIGN - unpadded % HEADER_ALIGN) % HEADER_ALIGN;
    let header_len = dict.len() + padding + 1;

    let mut out = Vec::with_capacity(unpadded + padding + t.as_slice().len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[1, 0]);
    out.extend_from_slice(&(header_len as u16).to_le_bytes());
    out.extend_from_slice(dict.as_bytes());
    out.extend(std::iter::repeat_n(b' ', padding));
    out.push(b'\n');
    for v in t.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses an NPY container into a C-ordered `f64` tensor.
pub fn decode(bytes: &[u8]) -> Result<ActivationTensor> {
    if bytes.len() < 10 || &bytes[..6] != MAGIC {
        return Err(SeisError::Format("missing NPY magic string".into()));
    }
    let (major, minor) = (bytes[6], bytes[7]);
    let (header_len, offset) = match major {
        1 => (u16::from_le_bytes([bytes[8], bytes[9]]) as usize, 10),
        2 => {
            if bytes.len() < 12 {
                return Err(SeisError::Format("truncated v2 preamble".into()));
            }
            let n = u32::from_le_bytes([bytes[8], bytes[9], bytes[10], bytes[11]]);
            (n as usize, 12)
        }
        _ => {
            return Err(SeisError::Format(format!(
                "unsupported NPY version {major}.{minor}"
            )))
        }
    };
    let data_start = offset + header_len;
    if bytes.len() < data_start {
        return Err(SeisError::Format("truncated header".into()));
    }
    let text = std::str::from_utf8(&bytes[offset..data_start])
        .map_err(|_| SeisError::Format("header is not ASCII".into()))?;
    let header = parse_header(text)?;

    let &[b, c, h, w] = header.shape.as_slice() else {
        return Err(SeisError::Shape(format!(
            "expected a 4-D array, found shape {:?}",
            header.shape
        )));
    };
    let dims = Dims::new(b, c, h, w)?;
    let payload = &bytes[data_start..];
    let expected = dims.len() * header.float.size();
    if payload.len() != expected {
        return Err(SeisError::Format(format!(
            "payload holds {} bytes, shape {dims} needs {expected}",
            payload.len()
        )));
    }

    let file_order: Vec<f64> = match (header.float, header.endian) {
        (Float::F64, Endian::Little) => payload
            .chunks_exact(8)
            .map(|ch| f64::from_le_bytes(ch.try_into().unwrap()))
            .collect(),
        (Float::F64, Endian::Big) => payload
            .chunks_exact(8)
            .map(|ch| f64::from_be_bytes(ch.try_into().unwrap()))
            .collect(),
        (Float::F32, Endian::Little) => payload
            .chunks_exact(4)
            .map(|ch| f32::from_le_bytes(ch.try_into().unwrap()) as f64)
            .collect(),
        (Float::F32, Endian::Big) => payload
            .chunks_exact(4)
            .map(|ch| f32::from_be_bytes(ch.try_into().unwrap()) as f64)
            .collect(),
    };

    let data = if header.fortran_order {
        // element (i, j, y, x) sits at i + b·(j + c·(y + h·x))
        let mut out = vec![0.0; dims.len()];
        let mut k = 0;
        for i in 0..b {
            for j in 0..c {
                for y in 0..h {
                    for x in 0..w {
                        out[k] = file_order[i + b * (j + c * (y + h * x))];
                        k += 1;
                    }
                }
            }
        }
        out
    } else {
        file_order
    };
    ActivationTensor::new(dims, data)
}

fn parse_header(text: &str) -> Result<Header> {
    let mut p = DictParser { s: text.as_bytes(), pos: 0 };
    let entries = p.dict()?;
    let mut descr = None;
    let mut fortran = None;
    let mut shape = None;
    for (key, value) in entries {
        match (key.as_str(), value) {
            ("descr", Value::Str(s)) => descr = Some(s),
            ("fortran_order", Value::Bool(b)) => fortran = Some(b),
            ("shape", Value::Tuple(t)) => shape = Some(t),
            ("descr" | "fortran_order" | "shape", _) => {
                return Err(SeisError::Format(format!("header key '{key}' has the wrong type")))
            }
            _ => {}
        }
    }
    let descr = descr.ok_or_else(|| SeisError::Format("header lacks 'descr'".into()))?;
    let fortran_order =
        fortran.ok_or_else(|| SeisError::Format("header lacks 'fortran_order'".into()))?;
    let shape = shape.ok_or_else(|| SeisError::Format("header lacks 'shape'".into()))?;

    let (endian, float) = match descr.as_str() {
        "<f8" => (Endian::Little, Float::F64),
        ">f8" => (Endian::Big, Float::F64),
        "<f4" => (Endian::Little, Float::F32),
        ">f4" => (Endian::Big, Float::F32),
        "=f8" if cfg!(target_endian = "little") => (Endian::Little, Float::F64),
        "=f4" if cfg!(target_endian = "little") => (Endian::Little, Float::F32),
        other => return Err(SeisError::Dtype(other.to_string())),
    };
    Ok(Header {
        endian,
        float,
        fortran_order,
        shape,
    })
}

#[derive(Debug)]
enum Value {
    Str(String),
    Bool(bool),
    Tuple(Vec<usize>),
}

/// Parser for the Python dict literal stored in NPY headers.
struct DictParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl DictParser<'_> {
    fn err(&self, what: &str) -> SeisError {
        SeisError::Format(format!("malformed header at byte {}: {what}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", ch as char)))
        }
    }

    fn dict(&mut self) -> Result<Vec<(String, Value)>> {
        self.expect(b'{')?;
        let mut out = Vec::new();
        loop {
            if self.peek() == Some(b'}') {
                self.pos += 1;
                break;
            }
            let key = self.string()?;
            self.expect(b':')?;
            let value = self.value()?;
            out.push((key, value));
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {}
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
        if self.peek().is_some() {
            return Err(self.err("trailing characters after dict"));
        }
        Ok(out)
    }

    fn string(&mut self) -> Result<String> {
        let quote = match self.peek() {
            Some(q @ (b'\'' | b'"')) => q,
            _ => return Err(self.err("expected a quoted string")),
        };
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != quote {
            self.pos += 1;
        }
        if self.pos == self.s.len() {
            return Err(self.err("unterminated string"));
        }
        let s = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        self.pos += 1;
        Ok(s)
    }

    fn value(&mut self) -> Result<Value> {
        match self.peek() {
            Some(b'\'' | b'"') => Ok(Value::Str(self.string()?)),
            Some(b'(') => self.tuple(),
            Some(_) => {
                let rest = &self.s[self.pos..];
                if rest.starts_with(b"True") {
                    self.pos += 4;
                    Ok(Value::Bool(true))
                } else if rest.starts_with(b"False") {
                    self.pos += 5;
                    Ok(Value::Bool(false))
                } else {
                    Err(self.err("unsupported value"))
                }
            }
            None => Err(self.err("unexpected end of header")),
        }
    }

    fn tuple(&mut self) -> Result<Value> {
        self.expect(b'(')?;
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Value::Tuple(items));
                }
                Some(d) if d.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                    // tolerate Python 2 long suffixes
                    if self.s.get(self.pos) == Some(&b'L') {
                        self.pos += 1;
                    }
                    items.push(digits.parse().map_err(|_| self.err("shape entry overflows"))?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {}
                        _ => return Err(self.err("expected ',' or ')' in shape")),
                    }
                }
                _ => return Err(self.err("expected a shape entry")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw_npy(descr: &str, fortran: bool, shape: &str, payload: &[u8], version: u8) -> Vec<u8> {
        let dict = format!(
            "{{'descr': '{descr}', 'fortran_order': {}, 'shape': {shape}, }}\n",
            if fortran { "True" } else { "False" }
        );
        let mut out = MAGIC.to_vec();
        out.extend_from_slice(&[version, 0]);
        if version == 1 {
            out.extend_from_slice(&(dict.len() as u16).to_le_bytes());
        } else {
            out.extend_from_slice(&(dict.len() as u32).to_le_bytes());
        }
        out.extend_from_slice(dict.as_bytes());
        out.extend_from_slice(payload);
        out
    }

    #[test]
    fn zero_tensor_payload_is_32_zero_bytes() {
        let t = ActivationTensor::zeros(Dims::new(1, 1, 2, 2).unwrap());
        let bytes = encode(&t);
        assert_eq!(bytes.len() % HEADER_ALIGN, 32);
        let header_len = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
        let payload = &bytes[10 + header_len..];
        assert_eq!(payload, &[0u8; 32]);
        assert_eq!(bytes[10 + header_len - 1], b'\n');
    }

    #[test]
    fn header_is_parsed_regardless_of_key_order_and_spacing() {
        let h = parse_header("{ 'shape':(2,3,4,5),'fortran_order':True,  \"descr\" : '>f4' }   \n")
            .unwrap();
        assert_eq!(
            h,
            Header {
                endian: Endian::Big,
                float: Float::F32,
                fortran_order: true,
                shape: vec![2, 3, 4, 5],
            }
        );
        assert_eq!(parse_header("{'descr': '<f8', 'fortran_order': False, 'shape': (5,), }").unwrap().shape, vec![5]);
    }

    #[test]
    fn rejects_bad_magic_and_version() {
        assert!(matches!(decode(b"\x93NUMPZ\x01\x00\x00\x00"), Err(SeisError::Format(_))));
        let mut v = raw_npy("<f8", false, "(1, 1, 1, 1)", &[0; 8], 1);
        v[6] = 4;
        assert!(matches!(decode(&v), Err(SeisError::Format(_))));
    }

    #[test]
    fn rejects_wrong_ndim_and_dtype() {
        let v = raw_npy("<f8", false, "(2, 2, 2)", &[0; 64], 1);
        assert!(matches!(decode(&v), Err(SeisError::Shape(_))));
        let v = raw_npy("<i8", false, "(1, 1, 1, 1)", &[0; 8], 1);
        assert!(matches!(decode(&v), Err(SeisError::Dtype(ref d)) if d == "<i8"));
    }

    #[test]
    fn rejects_truncated_payload() {
        let v = raw_npy("<f8", false, "(1, 1, 2, 2)", &[0; 24], 1);
        assert!(matches!(decode(&v), Err(SeisError::Format(_))));
    }

    #[test]
    fn nan_reports_flat_index() {
        let mut payload = Vec::new();
        for v in [0.0f64, 1.0, 2.0, f64::INFINITY] {
            payload.extend_from_slice(&v.to_le_bytes());
        }
        let v = raw_npy("<f8", false, "(1, 1, 2, 2)", &payload, 1);
        assert!(matches!(decode(&v), Err(SeisError::Validation(ref m)) if m.contains("index 3")));
    }

    #[test]
    fn reads_v2_big_endian_f32_fortran() {
        // logical array a[0,0,y,x] = 10y + x on a 1x1x2x3 grid, stored column-major
        let mut payload = Vec::new();
        for x in 0..3 {
            for y in 0..2 {
                payload.extend_from_slice(&((10 * y + x) as f32).to_be_bytes());
            }
        }
        let v = raw_npy(">f4", true, "(1, 1, 2, 3)", &payload, 2);
        let t = decode(&v).unwrap();
        assert_eq!(t.as_slice(), &[0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
    }
}
