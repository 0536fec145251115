//! Just enough lexing of C-family sources to find annotations reliably:
//! comments are blanked and string literal spans are recorded.

/// Source text with comments replaced by spaces. Byte offsets and line
/// numbers are identical to the original.
pub(crate) struct Masked {
    pub text: String,
    in_string: Vec<bool>,
    line_starts: Vec<usize>,
}

impl Masked {
    pub fn new(source: &str) -> Masked {
        let bytes = source.as_bytes();
        let mut out = bytes.to_vec();
        let mut in_string = vec![false; bytes.len()];
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'/' if bytes.get(i + 1) == Some(&b'/') => {
                    while i < bytes.len() && bytes[i] != b'\n' {
                        out[i] = b' ';
                        i += 1;
                    }
                }
                b'/' if bytes.get(i + 1) == Some(&b'*') => {
                    let end = find_from(bytes, i + 2, b"*/").map_or(bytes.len(), |e| e + 2);
                    blank(&mut out, i, end);
                    i = end;
                }
                b'"' if bytes[i..].starts_with(b"\"\"\"") => {
                    let end = find_from(bytes, i + 3, b"\"\"\"").map_or(bytes.len(), |e| e + 3);
                    in_string[i..end].iter_mut().for_each(|b| *b = true);
                    i = end;
                }
                quote @ (b'"' | b'\'') => {
                    let start = i;
                    i += 1;
                    while i < bytes.len() && bytes[i] != quote && bytes[i] != b'\n' {
                        if bytes[i] == b'\\' {
                            i += 1;
                        }
                        i += 1;
                    }
                    let end = (i + 1).min(bytes.len());
                    in_string[start..end].iter_mut().for_each(|b| *b = true);
                    i = end;
                }
                _ => i += 1,
            }
        }
        let text = String::from_utf8(out).expect("only whole characters are blanked");
        let line_starts = std::iter::once(0)
            .chain(source.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        Masked {
            text,
            in_string,
            line_starts,
        }
    }

    pub fn bytes(&self) -> &[u8] {
        self.text.as_bytes()
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_string(&self, pos: usize) -> bool {
        self.in_string.get(pos).copied().unwrap_or(false)
    }

    /// 1-based line of byte offset `pos`.
    pub fn line_of(&self, pos: usize) -> usize {
        self.line_starts.partition_point(|&s| s <= pos)
    }

    pub fn slice(&self, start: usize, end: usize) -> &str {
        &self.text[start..end]
    }

    pub fn skip_ws(&self, mut pos: usize) -> usize {
        let b = self.bytes();
        while pos < b.len() && b[pos].is_ascii_whitespace() {
            pos += 1;
        }
        pos
    }

    /// Given `open` at a `(`, `{`, `[` or `<`, returns the offset of the
    /// matching closer. Brackets inside string literals are ignored.
    pub fn matching_close(&self, open: usize) -> Option<usize> {
        let b = self.bytes();
        let (o, c) = match b.get(open)? {
            b'(' => (b'(', b')'),
            b'{' => (b'{', b'}'),
            b'[' => (b'[', b']'),
            b'<' => (b'<', b'>'),
            _ => return None,
        };
        let mut depth = 0usize;
        for (i, &ch) in b.iter().enumerate().skip(open) {
            if self.is_string(i) {
                continue;
            }
            if ch == o {
                depth += 1;
            } else if ch == c {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
        }
        None
    }

    /// First offset at or after `pos` holding one of `targets`, outside
    /// string literals.
    pub fn find_any(&self, pos: usize, targets: &[u8]) -> Option<usize> {
        self.bytes()
            .iter()
            .enumerate()
            .skip(pos)
            .find(|&(i, ch)| targets.contains(ch) && !self.is_string(i))
            .map(|(i, _)| i)
    }
}

fn find_from(haystack: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    haystack
        .get(from..)?
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| p + from)
}

fn blank(out: &mut [u8], start: usize, end: usize) {
    for b in &mut out[start..end] {
        if *b != b'\n' {
            *b = b' ';
        }
    }
}

/// Splits `text` on commas that are not nested in brackets or strings.
pub(crate) fn split_top_level(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut quote: Option<u8> = None;
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        match quote {
            Some(q) => {
                if ch == b'\\' {
                    i += 1;
                } else if ch == q {
                    quote = None;
                }
            }
            None => match ch {
                b'"' | b'\'' => quote = Some(ch),
                b'(' | b'{' | b'[' | b'<' => depth += 1,
                b')' | b'}' | b']' | b'>' => depth -= 1,
                b',' if depth == 0 => {
                    parts.push(text[start..i].trim());
                    start = i + 1;
                }
                _ => {}
            },
        }
        i += 1;
    }
    let last = text[start..].trim();
    if !last.is_empty() || !parts.is_empty() {
        parts.push(last);
    }
    parts
}
