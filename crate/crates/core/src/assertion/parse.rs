use crate::assertion::measure::{looks_like_measure, parse_measure};
use crate::assertion::{is_symbol, Assertion, LexiconLine, ObjectBlock, Term, NA};
use crate::diagnostics::{Code, Diagnostic};
use crate::error::{Error, Result};
use crate::grid::{self, Grid};
use crate::ontology::Language;

/// Everything recovered from one file.
#[derive(Debug, Clone, Default)]
pub struct ParsedDatabase {
    pub blocks: Vec<ObjectBlock>,
    pub grids: Vec<Grid>,
    /// Header line of each grid, parallel to `grids`.
    pub grid_lines: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParsedDatabase {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    /// Serializes blocks followed by grids.
    pub fn to_text(&self) -> String {
        let mut out = super::serialize(&self.blocks);
        for g in &self.grids {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&grid::render(g));
        }
        out
    }

    /// Structural equality of blocks and grids, ignoring positions and
    /// diagnostics.
    pub fn same_content(&self, other: &ParsedDatabase) -> bool {
        self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| a.same_content(b))
            && self.grids == other.grids
    }
}

/// Parses a whole knowledge-base file. Never fails: problems become
/// diagnostics, and a block containing an error is dropped.
pub fn parse_database(text: &str) -> ParsedDatabase {
    parse_database_with_default(text, None)
}

/// Like [`parse_database`], but assertions and lexicon lines that appear
/// before any `Object` header belong to `default_concept`. This is how
/// headerless listings are read.
pub fn parse_database_with_default(text: &str, default_concept: Option<&str>) -> ParsedDatabase {
    Parser::new(text, default_concept).run()
}

/// Parses a single bracketed assertion; `^` resolves to `self_concept`.
pub fn parse_assertion(text: &str, self_concept: Option<&str>) -> Result<Assertion> {
    let src = Source::new(text);
    let start = text.len() - text.trim_start().len();
    let (assertion, end) = src.assertion(start, self_concept).map_err(|e| e.into_error(&src))?;
    if let Some(extra) = text[end..].char_indices().find(|(_, c)| !c.is_whitespace()) {
        let (line, col) = src.line_col(end + extra.0);
        return Err(Error::Syntax { line, col, message: "unexpected text after assertion".into() });
    }
    Ok(assertion)
}

struct Source<'a> {
    text: &'a str,
    line_starts: Vec<usize>,
}

#[derive(Debug)]
struct Located {
    error: Error,
    offset: usize,
}

impl Located {
    fn new(error: Error, offset: usize) -> Self {
        Located { error, offset }
    }

    fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Located::new(Error::Syntax { line: 0, col: 0, message: message.into() }, offset)
    }

    /// Fills in line and column for the positional variants.
    fn into_error(self, src: &Source) -> Error {
        let (line, col) = src.line_col(self.offset);
        match self.error {
            Error::Syntax { message, .. } => Error::Syntax { line, col, message },
            Error::UnbalancedBracket { .. } => Error::UnbalancedBracket { line, col },
            other => other,
        }
    }

    fn into_diagnostic(self, src: &Source) -> Diagnostic {
        let (line, col) = src.line_col(self.offset);
        let (code, message) = match self.error {
            Error::Syntax { message, .. } => (Code::SyntaxError, message),
            Error::UnbalancedBracket { .. } => (Code::UnbalancedBracket, "unbalanced bracket".to_string()),
            e @ Error::UnknownUnit(_) => (Code::UnknownUnit, e.to_string()),
            e @ Error::MalformedNumber(_) => (Code::MalformedNumber, e.to_string()),
            e @ Error::SelfRefWithoutContext => (Code::SelfRefWithoutContext, e.to_string()),
            e => (Code::SyntaxError, e.to_string()),
        };
        Diagnostic::error(code, line, col, message)
    }
}

fn starts_header(line: &str) -> bool {
    line.starts_with("==") || is_object_header(line)
}

fn is_object_header(line: &str) -> bool {
    line == "Object" || line.starts_with("Object ") || line.starts_with("Object\t")
}

impl<'a> Source<'a> {
    fn new(text: &'a str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Source { text, line_starts }
    }

    /// 1-based line and column (in characters) of a byte offset.
    fn line_col(&self, offset: usize) -> (usize, usize) {
        let line = self.line_starts.partition_point(|&s| s <= offset);
        let start = self.line_starts[line - 1];
        let col = self.text[start..offset.min(self.text.len())].chars().count() + 1;
        (line, col)
    }

    fn line_index(&self, offset: usize) -> usize {
        self.line_starts.partition_point(|&s| s <= offset) - 1
    }

    /// Skips whitespace. Refuses to run into a line that opens a new block,
    /// so a missing `]` cannot swallow the rest of the file.
    fn skip_ws(&self, mut pos: usize, open: usize) -> std::result::Result<usize, Located> {
        let bytes = self.text.as_bytes();
        while pos < bytes.len() && (bytes[pos] as char).is_ascii_whitespace() {
            if bytes[pos] == b'\n' && starts_header(&self.text[pos + 1..]) {
                return Err(Located::new(Error::UnbalancedBracket { line: 0, col: 0 }, open));
            }
            pos += 1;
        }
        Ok(pos)
    }

    fn assertion(&self, pos: usize, self_concept: Option<&str>) -> std::result::Result<(Assertion, usize), Located> {
        let open = pos;
        if !self.text[pos..].starts_with('[') {
            return Err(Located::syntax(pos, "expected `[`"));
        }
        let mut pos = pos + 1;
        let mut predicate: Option<String> = None;
        let mut args = Vec::new();
        loop {
            pos = self.skip_ws(pos, open)?;
            let Some(c) = self.text[pos..].chars().next() else {
                return Err(Located::new(Error::UnbalancedBracket { line: 0, col: 0 }, open));
            };
            match c {
                ']' => {
                    pos += 1;
                    break;
                }
                '[' => {
                    if predicate.is_none() {
                        return Err(Located::syntax(pos, "predicate must be a symbol"));
                    }
                    let (nested, end) = self.assertion(pos, self_concept)?;
                    args.push(Term::Nested(nested));
                    pos = end;
                }
                _ => {
                    let len = self.text[pos..]
                        .find(|c: char| c.is_whitespace() || c == '[' || c == ']')
                        .unwrap_or(self.text.len() - pos);
                    let token = &self.text[pos..pos + len];
                    if predicate.is_none() {
                        if token == NA || token == "^" || !is_symbol(token) || looks_like_measure(token) {
                            return Err(Located::syntax(pos, format!("predicate must be a symbol, got `{token}`")));
                        }
                        predicate = Some(token.to_string());
                    } else {
                        args.push(atom(token, self_concept).map_err(|e| match e {
                            Error::Syntax { message, .. } => Located::syntax(pos, message),
                            other => Located::new(other, pos),
                        })?);
                    }
                    pos += len;
                }
            }
        }
        let Some(predicate) = predicate else {
            return Err(Located::syntax(open, "empty assertion"));
        };
        if args.is_empty() {
            return Err(Located::syntax(open, format!("`{predicate}` needs at least one argument")));
        }
        Ok((Assertion { predicate, args }, pos))
    }
}

fn atom(token: &str, self_concept: Option<&str>) -> Result<Term> {
    if token == "^" {
        return self_concept.map(Term::symbol).ok_or(Error::SelfRefWithoutContext);
    }
    if token == NA {
        return Ok(Term::Na);
    }
    if looks_like_measure(token) {
        return parse_measure(token).map(Term::Measure);
    }
    if is_symbol(token) {
        return Ok(Term::symbol(token));
    }
    Err(Error::Syntax { line: 0, col: 0, message: format!("invalid symbol `{token}`") })
}

/// `[English]`, `[French]`, ...: a capitalized word alone in brackets.
fn is_lexicon_line(line: &str) -> bool {
    let Some(rest) = line.strip_prefix('[') else { return false };
    let Some((word, _)) = rest.split_once(']') else { return false };
    word.chars().next().is_some_and(char::is_uppercase) && word.chars().all(char::is_alphabetic)
}

struct OpenBlock {
    block: ObjectBlock,
    rejected: bool,
}

struct Parser<'a> {
    src: Source<'a>,
    lines: Vec<&'a str>,
    default_concept: Option<&'a str>,
    out: ParsedDatabase,
    current: Option<OpenBlock>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, default_concept: Option<&'a str>) -> Self {
        let lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
        Parser { src: Source::new(text), lines, default_concept, out: ParsedDatabase::default(), current: None }
    }

    fn error(&mut self, d: Diagnostic) {
        if let Some(open) = self.current.as_mut() {
            open.rejected = true;
        }
        self.out.diagnostics.push(d);
    }

    fn finish_block(&mut self) {
        if let Some(open) = self.current.take() {
            if !open.rejected {
                self.out.blocks.push(open.block);
            }
        }
    }

    /// The block that stray content belongs to, opening the default block
    /// on first use.
    fn ensure_block(&mut self, line: usize) -> bool {
        if self.current.is_some() {
            return true;
        }
        match self.default_concept {
            Some(name) => {
                self.current = Some(OpenBlock { block: ObjectBlock::new(name), rejected: false });
                // Only one implicit block per file.
                self.default_concept = None;
                true
            }
            None => {
                self.out.diagnostics.push(Diagnostic::error(
                    Code::OutsideBlock,
                    line,
                    1,
                    "content outside of an Object block",
                ));
                false
            }
        }
    }

    fn self_concept(&self) -> Option<&str> {
        self.current.as_ref().map(|o| o.block.concept.as_str())
    }

    fn run(mut self) -> ParsedDatabase {
        let mut i = 0;
        while i < self.lines.len() {
            let raw = self.lines[i];
            let trimmed = raw.trim();
            let line_no = i + 1;
            if trimmed.is_empty() || trimmed.starts_with(';') {
                i += 1;
            } else if raw.starts_with("==") {
                self.finish_block();
                i = self.grid(i);
            } else if is_object_header(trimmed) {
                self.finish_block();
                self.header(i, trimmed);
                i += 1;
            } else if is_lexicon_line(trimmed) {
                i = self.lexicon(i);
            } else if trimmed.starts_with('[') {
                i = self.assertions(i);
            } else {
                let col = raw.len() - raw.trim_start().len() + 1;
                let d = Diagnostic::error(
                    Code::SyntaxError,
                    line_no,
                    col,
                    format!("expected an assertion, got `{trimmed}`"),
                );
                if self.current.is_some() {
                    self.error(d);
                } else {
                    self.out.diagnostics.push(d);
                }
                i += 1;
            }
        }
        self.finish_block();
        self.out
    }

    fn header(&mut self, i: usize, trimmed: &str) {
        let name = trimmed["Object".len()..].trim();
        if is_symbol(name) && name != NA {
            let mut block = ObjectBlock::new(name);
            block.line = i + 1;
            self.current = Some(OpenBlock { block, rejected: false });
        } else {
            // Swallow the body so it does not produce a cascade of errors.
            self.current = Some(OpenBlock { block: ObjectBlock::new(""), rejected: true });
            let col = self.lines[i].find("Object").unwrap_or(0) + 1;
            self.out.diagnostics.push(Diagnostic::error(
                Code::SyntaxError,
                i + 1,
                col,
                format!("bad Object header: `{trimmed}`"),
            ));
        }
    }

    fn grid(&mut self, start: usize) -> usize {
        let mut end = start + 1;
        while end < self.lines.len() && !self.lines[end].is_empty() {
            end += 1;
        }
        let chunk = self.lines[start..end].join("\n");
        match grid::parse_grid(&chunk) {
            Ok((g, diags)) => {
                self.out.diagnostics.extend(diags.into_iter().map(|d| d.shifted(start)));
                self.out.grids.push(g);
                self.out.grid_lines.push(start + 1);
            }
            Err(e) => self.out.diagnostics.push(Diagnostic::error(Code::MalformedHeader, start + 1, 1, e.to_string())),
        }
        end
    }

    fn lexicon(&mut self, start: usize) -> usize {
        let mut text = self.lines[start].trim().to_string();
        let mut next = start + 1;
        // A trailing comma continues the phrase list on the next line.
        while text.ends_with(',') && next < self.lines.len() {
            let cont = self.lines[next].trim();
            if cont.is_empty() || cont.starts_with('[') || cont.starts_with(';') || starts_header(cont) {
                break;
            }
            text.push(' ');
            text.push_str(cont);
            next += 1;
        }
        if !self.ensure_block(start + 1) {
            return next;
        }
        let decoded = html_escape::decode_html_entities(&text);
        match parse_lexicon(&decoded) {
            Ok(lines) => {
                if let Some(open) = self.current.as_mut() {
                    open.block.lexicon.extend(lines);
                }
            }
            Err(message) => {
                let col = self.lines[start].len() - self.lines[start].trim_start().len() + 1;
                self.error(Diagnostic::error(Code::SyntaxError, start + 1, col, message));
            }
        }
        next
    }

    /// Parses one or more assertions starting on line `start`; returns the
    /// index of the first line after them.
    fn assertions(&mut self, start: usize) -> usize {
        if !self.ensure_block(start + 1) {
            return start + 1;
        }
        let raw = self.lines[start];
        let mut pos = self.src.line_starts[start] + (raw.len() - raw.trim_start().len());
        loop {
            let self_concept = self.self_concept().map(str::to_owned);
            match self.src.assertion(pos, self_concept.as_deref()) {
                Ok((a, end)) => {
                    if let Some(open) = self.current.as_mut() {
                        open.block.assertions.push(a);
                    }
                    let line = self.src.line_index(end.saturating_sub(1).max(pos));
                    let line_end = self.src.line_starts[line] + self.lines[line].len();
                    let rest = &self.src.text[end..line_end];
                    let skip = rest.len() - rest.trim_start().len();
                    let rest = rest.trim();
                    if rest.is_empty() || rest.starts_with(';') {
                        return line + 1;
                    }
                    if rest.starts_with('[') {
                        pos = end + skip;
                        continue;
                    }
                    let (l, c) = self.src.line_col(end + skip);
                    self.error(Diagnostic::error(Code::SyntaxError, l, c, "unexpected text after assertion"));
                    return line + 1;
                }
                Err(located) => {
                    let unbalanced = matches!(located.error, Error::UnbalancedBracket { .. });
                    let d = located.into_diagnostic(&self.src);
                    self.error(d);
                    if unbalanced {
                        // Resume at the header that stopped the scan, or EOF.
                        let mut next = start + 1;
                        while next < self.lines.len() && !starts_header(self.lines[next]) {
                            next += 1;
                        }
                        return next;
                    }
                    // Skip to the end of this assertion as far as brackets go.
                    return self.skip_balanced(pos);
                }
            }
        }
    }

    fn skip_balanced(&self, pos: usize) -> usize {
        let mut depth = 0i32;
        for (i, c) in self.src.text[pos..].char_indices() {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth <= 0 {
                        return self.src.line_index(pos + i) + 1;
                    }
                }
                '\n' if starts_header(&self.src.text[pos + i + 1..]) => {
                    return self.src.line_index(pos + i) + 1;
                }
                _ => {}
            }
        }
        self.lines.len()
    }
}

/// `[English] a, b; [French] c, d;`
fn parse_lexicon(text: &str) -> std::result::Result<Vec<LexiconLine>, String> {
    let mut out = Vec::new();
    for segment in text.split(';') {
        let segment = segment.trim();
        if segment.is_empty() {
            continue;
        }
        let rest = segment.strip_prefix('[').ok_or_else(|| format!("expected `[Language]` in `{segment}`"))?;
        let (lang, phrases) =
            rest.split_once(']').ok_or_else(|| format!("unterminated language tag in `{segment}`"))?;
        let language: Language = lang.trim().parse()?;
        let phrases: Vec<String> =
            phrases.split(',').map(str::trim).filter(|p| !p.is_empty()).map(str::to_string).collect();
        if phrases.is_empty() {
            return Err(format!("no phrases for [{language}]"));
        }
        out.push(LexiconLine { language, phrases });
    }
    Ok(out)
}
