use std::fmt;

/// Index of a source text registered in a [`SourceMap`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FileId(pub u32);

/// The prelude is always registered first.
pub const PRELUDE_FILE: FileId = FileId(0);

/// Byte range in one source file.
///
/// Spans are diagnostic only: all spans compare equal, so expression trees
/// compare structurally.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub file: FileId,
    pub start: u32,
    pub end: u32,
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl std::hash::Hash for Span {
    fn hash<H: std::hash::Hasher>(&self, _state: &mut H) {}
}

impl Span {
    pub fn new(file: FileId, start: usize, end: usize) -> Self {
        Span {
            file,
            start: start as u32,
            end: end as u32,
        }
    }

    pub fn to(self, other: Span) -> Span {
        Span {
            file: self.file,
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Clone, Debug)]
struct SourceFile {
    name: String,
    text: String,
    line_starts: Vec<usize>,
}

/// Registered source texts, for turning spans into `name:line:col`.
#[derive(Clone, Debug)]
pub struct SourceMap {
    files: Vec<SourceFile>,
}

impl Default for SourceMap {
    fn default() -> Self {
        Self::new()
    }
}

impl SourceMap {
    /// A map with the prelude registered as [`PRELUDE_FILE`].
    pub fn new() -> Self {
        let mut map = SourceMap { files: Vec::new() };
        map.add("<prelude>", crate::prelude::PRELUDE_SOURCE);
        map
    }

    pub fn add(&mut self, name: impl Into<String>, text: impl Into<String>) -> FileId {
        let text = text.into();
        let line_starts = std::iter::once(0)
            .chain(text.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        self.files.push(SourceFile {
            name: name.into(),
            text,
            line_starts,
        });
        FileId(self.files.len() as u32 - 1)
    }

    pub fn text(&self, file: FileId) -> Option<&str> {
        self.files.get(file.0 as usize).map(|f| f.text.as_str())
    }

    pub fn snippet(&self, span: Span) -> Option<&str> {
        self.text(span.file)?
            .get(span.start as usize..span.end as usize)
    }

    /// 1-based line and column of the span start.
    pub fn line_col(&self, span: Span) -> Option<(usize, usize)> {
        let file = self.files.get(span.file.0 as usize)?;
        let offset = span.start as usize;
        let line = match file.line_starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let col = file
            .text
            .get(file.line_starts[line]..offset)?
            .chars()
            .count()
            + 1;
        Some((line + 1, col))
    }

    pub fn locate(&self, span: Span) -> Location<'_> {
        Location { map: self, span }
    }
}

pub struct Location<'a> {
    map: &'a SourceMap,
    span: Span,
}

impl fmt::Display for Location<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self
            .map
            .files
            .get(self.span.file.0 as usize)
            .map_or("<unknown>", |f| f.name.as_str());
        match self.map.line_col(self.span) {
            Some((line, col)) => write!(f, "{name}:{line}:{col}"),
            None => write!(f, "{name}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_and_column() {
        let mut map = SourceMap::new();
        let id = map.add("t.mul", "a;\n  #b()");
        let span = Span::new(id, 5, 9);
        assert_eq!(map.line_col(span), Some((2, 3)));
        assert_eq!(map.locate(span).to_string(), "t.mul:2:3");
        assert_eq!(map.snippet(span), Some("#b()"));
    }
}
