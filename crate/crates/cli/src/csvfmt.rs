//! Deterministic CSV assembly: LF line endings, UTF-8, floats printed
//! with 17 significant digits so repeated runs are byte-identical.

/// 17 significant digits in scientific notation.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Row-oriented CSV buffer.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
