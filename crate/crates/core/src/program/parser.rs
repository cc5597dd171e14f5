use crate::spin::Pauli;
use crate::units::{number_prefix_len, parse_quantity, Dimension};

use super::{Instruction, IonSet, ParseError, ParseErrorKind, PulseLength, PulseProgram, Span};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    span: Span,
}

fn err(kind: ParseErrorKind, span: Span, message: impl Into<String>) -> ParseError {
    ParseError { kind, span, message: message.into() }
}

/// Split a line (comment already removed) into whitespace-separated
/// tokens with character columns.
fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None; // (byte, column)
    let mut column = 0;
    for (byte, ch) in line.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                let text = &line[b..byte];
                tokens.push(Token { text, span: Span { line: line_no, column: c, len: text.chars().count() } });
            }
        } else if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, c)) = start {
        let text = &line[b..];
        tokens.push(Token { text, span: Span { line: line_no, column: c, len: text.chars().count() } });
    }
    tokens
}

/// Sub-span of `tok` starting `offset` characters in.
fn sub_span(tok: &Token<'_>, offset: usize, len: usize) -> Span {
    Span { line: tok.span.line, column: tok.span.column + offset, len: len.max(1) }
}

fn parse_count(tok: &Token<'_>, text: &str, offset: usize) -> Result<usize, ParseError> {
    match text.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(err(
            ParseErrorKind::SyntaxError,
            sub_span(tok, offset, text.chars().count()),
            format!("expected a positive integer, found `{text}`"),
        )),
    }
}

/// A quantity of the given dimension; bare numbers are taken as SI.
fn parse_value(tok: &Token<'_>, text: &str, offset: usize, dim: Dimension) -> Result<f64, ParseError> {
    let span = sub_span(tok, offset, text.chars().count());
    let (value, found) =
        parse_quantity(text).map_err(|e| err(ParseErrorKind::SyntaxError, span, e.to_string()))?;
    if found != dim && found != Dimension::Dimensionless {
        return Err(err(ParseErrorKind::SyntaxError, span, format!("expected a {dim} quantity, found {found}")));
    }
    Ok(value)
}

fn parse_ion_set(tok: &Token<'_>, ions: usize) -> Result<IonSet, ParseError> {
    if tok.text == "all" {
        return Ok(IonSet::All);
    }
    let mut list = Vec::new();
    let mut offset = 0;
    for part in tok.text.split(',') {
        let ion = parse_count(tok, part, offset)?;
        let span = sub_span(tok, offset, part.chars().count());
        if ion > ions {
            return Err(err(ParseErrorKind::SyntaxError, span, format!("ion {ion} out of range [1, {ions}]")));
        }
        if list.contains(&ion) {
            return Err(err(ParseErrorKind::DuplicateField, span, format!("ion {ion} listed twice")));
        }
        list.push(ion);
        offset += part.chars().count() + 1;
    }
    Ok(IonSet::List(list))
}

fn expect_args<'a>(
    keyword: &Token<'a>,
    args: &[Token<'a>],
    count: usize,
    usage: &str,
) -> Result<(), ParseError> {
    if args.len() < count {
        let span = Span { line: keyword.span.line, column: keyword.span.column, len: keyword.span.len };
        return Err(err(ParseErrorKind::SyntaxError, span, format!("expected `{usage}`")));
    }
    if let Some(extra) = args.get(count) {
        return Err(err(ParseErrorKind::SyntaxError, extra.span, format!("unexpected `{}`; expected `{usage}`", extra.text)));
    }
    Ok(())
}

const PULSE_USAGE: &str = "pulse ion=<i> rabi=<qty> detune=<qty> phase=<qty> (area=<n>pi|dur=<qty>)";

fn parse_pulse(keyword: &Token<'_>, args: &[Token<'_>], ions: usize) -> Result<Instruction, ParseError> {
    let mut ion = None;
    let mut rabi = None;
    let mut detune = None;
    let mut phase = None;
    let mut length: Option<(PulseLength, &str)> = None;
    let mut seen: Vec<&str> = Vec::new();

    for tok in args {
        let Some((key, value)) = tok.text.split_once('=') else {
            return Err(err(ParseErrorKind::SyntaxError, tok.span, format!("expected key=value, found `{}`", tok.text)));
        };
        let key_span = sub_span(tok, 0, key.chars().count());
        let off = key.chars().count() + 1;
        if !["ion", "rabi", "detune", "phase", "area", "dur"].contains(&key) {
            return Err(err(ParseErrorKind::UnknownKeyword, key_span, format!("unknown pulse field `{key}`")));
        }
        if seen.contains(&key) {
            return Err(err(ParseErrorKind::DuplicateField, key_span, format!("field `{key}` given twice")));
        }
        seen.push(key);
        if value.is_empty() {
            return Err(err(ParseErrorKind::SyntaxError, tok.span, format!("field `{key}` has no value")));
        }
        match key {
            "ion" => {
                let i = parse_count(tok, value, off)?;
                if i > ions {
                    return Err(err(
                        ParseErrorKind::SyntaxError,
                        sub_span(tok, off, value.chars().count()),
                        format!("ion {i} out of range [1, {ions}]"),
                    ));
                }
                ion = Some(i);
            }
            "rabi" => {
                let r = parse_value(tok, value, off, Dimension::Frequency)?;
                if r < 0.0 {
                    return Err(err(
                        ParseErrorKind::SyntaxError,
                        sub_span(tok, off, value.chars().count()),
                        "rabi frequency must be >= 0",
                    ));
                }
                rabi = Some((r, tok));
            }
            "detune" => detune = Some(parse_value(tok, value, off, Dimension::Frequency)?),
            "phase" => phase = Some(parse_value(tok, value, off, Dimension::Angle)?),
            "area" | "dur" => {
                if let Some((_, other)) = length {
                    return Err(err(
                        ParseErrorKind::ConflictingFields,
                        key_span,
                        format!("`{key}` conflicts with `{other}`; give exactly one of area or dur"),
                    ));
                }
                let value_span = sub_span(tok, off, value.chars().count());
                let l = if key == "area" {
                    let n = value.strip_suffix("pi").filter(|n| number_prefix_len(n) == n.len() && !n.is_empty());
                    let Some(n) = n else {
                        return Err(err(ParseErrorKind::SyntaxError, value_span, "area must be written as <number>pi"));
                    };
                    PulseLength::Area(n.parse().map_err(|_| {
                        err(ParseErrorKind::SyntaxError, value_span, format!("malformed number `{n}`"))
                    })?)
                } else {
                    PulseLength::Duration(parse_value(tok, value, off, Dimension::Time)?)
                };
                let v = match l {
                    PulseLength::Area(a) | PulseLength::Duration(a) => a,
                };
                if v < 0.0 {
                    return Err(err(ParseErrorKind::SyntaxError, value_span, format!("`{key}` must be >= 0")));
                }
                length = Some((l, if key == "area" { "area" } else { "dur" }));
            }
            _ => unreachable!(),
        }
    }

    let missing = |field: &str| {
        err(ParseErrorKind::MissingField, keyword.span, format!("pulse is missing `{field}`; usage: {PULSE_USAGE}"))
    };
    let ion = ion.ok_or_else(|| missing("ion"))?;
    let (rabi_hz, rabi_tok) = rabi.ok_or_else(|| missing("rabi"))?;
    let (length, _) = length.ok_or_else(|| missing("area or dur"))?;
    if matches!(length, PulseLength::Area(_)) && rabi_hz == 0.0 {
        return Err(err(ParseErrorKind::SyntaxError, rabi_tok.span, "an area pulse needs rabi > 0"));
    }
    Ok(Instruction::Pulse {
        ion,
        rabi_hz,
        detune_hz: detune.unwrap_or(0.0),
        phase: phase.unwrap_or(0.0),
        length,
    })
}

fn parse_observable(tok: &Token<'_>) -> Result<Pauli, ParseError> {
    match tok.text {
        "sx" => Ok(Pauli::X),
        "sy" => Ok(Pauli::Y),
        "sz" => Ok(Pauli::Z),
        other => Err(err(
            ParseErrorKind::SyntaxError,
            tok.span,
            format!("unknown observable `{other}`; expected sx, sy or sz"),
        )),
    }
}

/// Parse pulse-program source text.
pub fn parse(source: &str) -> Result<PulseProgram, ParseError> {
    let mut ions: Option<(usize, Span)> = None;
    let mut comments = Vec::new();
    let mut instructions = Vec::new();
    let mut spans = Vec::new();

    for (idx, raw_line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let (code, comment) = match raw_line.find('#') {
            Some(p) => (&raw_line[..p], Some(&raw_line[p + 1..])),
            None => (raw_line, None),
        };
        let tokens = tokenize(code, line_no);
        let Some((keyword, args)) = tokens.split_first() else {
            if let Some(c) = comment {
                if instructions.is_empty() {
                    comments.push(c.trim_end().to_string());
                }
            }
            continue;
        };

        if keyword.text == "ions" {
            if let Some((_, first)) = ions {
                return Err(err(
                    ParseErrorKind::DuplicateField,
                    keyword.span,
                    format!("`ions` already declared at {first}"),
                ));
            }
            expect_args(keyword, args, 1, "ions <int>")?;
            ions = Some((parse_count(&args[0], args[0].text, 0)?, keyword.span));
            continue;
        }

        let known = ["pulse", "delay", "measure", "log"];
        if !known.contains(&keyword.text) {
            return Err(err(
                ParseErrorKind::UnknownKeyword,
                keyword.span,
                format!("unknown instruction `{}`", keyword.text),
            ));
        }
        let instruction = if keyword.text == "pulse" {
            // Field errors are reported before a missing header so that
            // they point at the offending token.
            let n = ions.map_or(usize::MAX, |(n, _)| n);
            parse_pulse(keyword, args, n)?
        } else {
            let n = ions.map_or(usize::MAX, |(n, _)| n);
            match keyword.text {
                "delay" => {
                    expect_args(keyword, args, 1, "delay <qty>")?;
                    let d = parse_value(&args[0], args[0].text, 0, Dimension::Time)?;
                    if d < 0.0 {
                        return Err(err(ParseErrorKind::SyntaxError, args[0].span, "delay must be >= 0"));
                    }
                    Instruction::Delay { duration: d }
                }
                "measure" => {
                    expect_args(keyword, args, 2, "measure z <i,...|all>")?;
                    if args[0].text != "z" {
                        return Err(err(
                            ParseErrorKind::SyntaxError,
                            args[0].span,
                            format!("only z measurements are supported, found `{}`", args[0].text),
                        ));
                    }
                    Instruction::MeasureZ { ions: parse_ion_set(&args[1], n)? }
                }
                "log" => {
                    expect_args(keyword, args, 2, "log <sx|sy|sz> <i,...|all>")?;
                    Instruction::Log { observable: parse_observable(&args[0])?, ions: parse_ion_set(&args[1], n)? }
                }
                _ => unreachable!(),
            }
        };
        if ions.is_none() {
            return Err(err(
                ParseErrorKind::MissingHeader,
                keyword.span,
                "instruction before the `ions <int>` header",
            ));
        }
        instructions.push(instruction);
        spans.push(keyword.span);
    }

    if instructions.is_empty() {
        let span = ions.map_or(Span { line: 1, column: 1, len: 0 }, |(_, s)| s);
        return Err(err(ParseErrorKind::EmptyProgram, span, "program has no instructions"));
    }
    let (ions, _) = ions.expect("checked when the first instruction was parsed");
    Ok(PulseProgram { ions, comments, instructions, spans })
}
