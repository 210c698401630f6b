use std::collections::HashMap;
use std::fmt;

use crate::folds::{Axiom, Level};

use super::ast::{BinOp, Expr, Field, Func, LineDef, MacroKind, Program, Relation, Stmt};

/// A syntax or resolution error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The offending token, empty at end of line.
    pub token: String,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at '{}')", self.token)?;
        }
        Ok(())
    }
}

impl std::error::Error for SourceError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    column: usize,
    text: String,
}

const SYMBOLS: [&str; 15] = ["==", "->", "(", ")", ",", "=", "<", ">", "?", ".", "+", "-", "*", "/", "^"];

const KEYWORDS: [&str; 13] = [
    "level", "point", "line", "fold", "macro", "assert", "as", "through", "bisector", "meet", "sqrt", "cbrt",
    "cubicroot",
];

fn lex(line_no: usize, line: &str) -> Result<Vec<Token>, SourceError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let digit_at = |k: usize| chars.get(k).is_some_and(|c| c.is_ascii_digit());
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && digit_at(i + 1)) {
            while digit_at(i) {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' && digit_at(i + 1) {
                i += 1;
                while digit_at(i) {
                    i += 1;
                }
            }
            Tok::Num(chars[start..i].iter().collect())
        } else if c == '\u{2212}' {
            i += 1;
            Tok::Sym("-")
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(SourceError {
                    line: line_no,
                    column: start + 1,
                    message: format!("unexpected character '{c}'"),
                    token: c.to_string(),
                });
            };
            i += sym.chars().count();
            Tok::Sym(sym)
        };
        out.push(Token { tok, column: start + 1, text: chars[start..i].iter().collect() });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Point,
    Line,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Point => "point",
            Kind::Line => "line",
        }
    }
}

struct Parser<'a> {
    line: usize,
    end_column: usize,
    toks: Vec<Token>,
    pos: usize,
    symbols: &'a mut HashMap<String, Kind>,
    /// Whether expressions may reference bound objects.
    refs: bool,
}

type PResult<T> = Result<T, SourceError>;

impl Parser<'_> {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> SourceError {
        match self.toks.get(pos) {
            Some(t) => SourceError { line: self.line, column: t.column, message: message.into(), token: t.text.clone() },
            None => SourceError { line: self.line, column: self.end_column, message: message.into(), token: String::new() },
        }
    }

    fn error(&self, message: impl Into<String>) -> SourceError {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.peek_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{s}'")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected '{kw}'"))),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            Err(self.error("unexpected token"))
        } else {
            Ok(())
        }
    }

    /// A reference to an already bound object of the given kind.
    fn reference(&mut self, kind: Kind) -> PResult<String> {
        let at = self.pos;
        let name = self.ident(&format!("{} name", kind.name()))?;
        match self.symbols.get(&name) {
            None => Err(self.error_at(at, format!("unknown identifier '{name}'"))),
            Some(k) if *k != kind => Err(self.error_at(at, format!("'{name}' is a {}, expected a {}", k.name(), kind.name()))),
            Some(_) => Ok(name),
        }
    }

    /// A fresh name; recorded once the statement parses.
    fn binder(&mut self, pending: &[String]) -> PResult<String> {
        let at = self.pos;
        let name = self.ident("a name")?;
        if KEYWORDS.contains(&name.as_str()) || Func::from_name(&name).is_some() {
            return Err(self.error_at(at, format!("'{name}' is a reserved word")));
        }
        if self.symbols.contains_key(&name) || pending.contains(&name) {
            return Err(self.error_at(at, format!("'{name}' is already bound")));
        }
        Ok(name)
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinOp::Add
            } else if self.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(acc);
            };
            acc = Expr::Bin(op, Box::new(acc), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinOp::Mul
            } else if self.eat_sym("/") {
                BinOp::Div
            } else {
                return Ok(acc);
            };
            acc = Expr::Bin(op, Box::new(acc), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat_sym("^") {
            let n = match self.peek() {
                Some(Tok::Num(s)) => s.parse::<u32>().ok().filter(|n| *n <= 64),
                _ => None,
            };
            let n = n.ok_or_else(|| self.error("expected an exponent 0..64"))?;
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let at = self.pos;
        match self.peek().cloned() {
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(Expr::Num(s))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(func) = Func::from_name(&name) {
                    return self.call(func);
                }
                if !self.refs {
                    return Err(self.error_at(at, "object references are not allowed here"));
                }
                let kind = *self
                    .symbols
                    .get(&name)
                    .ok_or_else(|| self.error_at(at, format!("unknown identifier '{name}'")))?;
                if !self.eat_sym(".") {
                    return Ok(Expr::Ref(name));
                }
                let fat = self.pos;
                let field = match self.ident("a field")?.as_str() {
                    "x" => Field::X,
                    "y" => Field::Y,
                    "a" => Field::A,
                    "b" => Field::B,
                    "c" => Field::C,
                    other => return Err(self.error_at(fat, format!("unknown field '{other}'"))),
                };
                if field.of_point() != (kind == Kind::Point) {
                    return Err(self.error_at(fat, format!("a {} has no field '{}'", kind.name(), field.name())));
                }
                Ok(Expr::Field(name, field))
            }
            _ => Err(self.error("expected an expression")),
        }
    }

    fn call(&mut self, func: Func) -> PResult<Expr> {
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if func == Func::Slope {
            if !self.refs {
                return Err(self.error("object references are not allowed here"));
            }
            args.push(Expr::Ref(self.reference(Kind::Line)?));
        } else {
            for i in 0..func.arity() {
                if i > 0 {
                    self.expect_sym(",")?;
                }
                args.push(self.expr()?);
            }
        }
        self.expect_sym(")")?;
        Ok(Expr::Call(func, args))
    }

    /// A numeric expression: bare object references are rejected.
    fn numeric(&mut self) -> PResult<Expr> {
        let at = self.pos;
        let e = self.expr()?;
        if let Some(name) = bare_ref(&e) {
            return Err(self.error_at(at, format!("'{name}' is an object, not a number")));
        }
        Ok(e)
    }

    fn statement(&mut self, first: bool) -> PResult<(Stmt, Vec<(String, Kind)>)> {
        let at = self.pos;
        let head = self.ident("a statement")?;
        let stmt = match head.as_str() {
            "level" => {
                if !first {
                    return Err(self.error_at(at, "level must be the first statement"));
                }
                let lat = self.pos;
                let name = self.ident("a level name")?;
                let level: Level = name.parse().map_err(|e: String| self.error_at(lat, e))?;
                (Stmt::Level(level), vec![])
            }
            "point" => {
                let name = self.binder(&[])?;
                self.expect_sym("=")?;
                if self.eat_sym("(") {
                    self.refs = false;
                    let x = self.numeric()?;
                    self.expect_sym(",")?;
                    let y = self.numeric()?;
                    self.expect_sym(")")?;
                    (Stmt::Point { name: name.clone(), x, y }, vec![(name, Kind::Point)])
                } else {
                    self.keyword("meet")?;
                    let l = self.reference(Kind::Line)?;
                    let m = self.reference(Kind::Line)?;
                    (Stmt::Meet { name: name.clone(), l, m }, vec![(name, Kind::Point)])
                }
            }
            "line" => {
                let name = self.binder(&[])?;
                self.expect_sym("=")?;
                let def = if self.eat_sym("<") {
                    self.refs = false;
                    let a = self.numeric()?;
                    self.expect_sym(",")?;
                    let b = self.numeric()?;
                    self.expect_sym(",")?;
                    let c = self.numeric()?;
                    self.expect_sym(">")?;
                    LineDef::Coeffs(a, b, c)
                } else {
                    let kat = self.pos;
                    match self.ident("'through', 'bisector' or '<'")?.as_str() {
                        "through" => LineDef::Through(self.reference(Kind::Point)?, self.reference(Kind::Point)?),
                        "bisector" => LineDef::Bisector(self.reference(Kind::Point)?, self.reference(Kind::Point)?),
                        _ => return Err(self.error_at(kat, "expected 'through', 'bisector' or '<'")),
                    }
                };
                (Stmt::Line { name: name.clone(), def }, vec![(name, Kind::Line)])
            }
            "fold" => self.fold()?,
            "macro" => {
                let kat = self.pos;
                let kind = match self.ident("a macro name")?.as_str() {
                    "translate" => MacroKind::Translate,
                    "scale" => MacroKind::Scale,
                    "marklen" => MacroKind::MarkLength,
                    other => return Err(self.error_at(kat, format!("unknown macro '{other}'"))),
                };
                let mut args = Vec::new();
                for _ in 0..kind.arity() {
                    args.push(self.reference(Kind::Point)?);
                }
                self.keyword("as")?;
                let binder = self.binder(&[])?;
                (Stmt::Macro { kind, args, binder: binder.clone() }, vec![(binder, Kind::Point)])
            }
            "assert" => {
                let lat = self.pos;
                let lhs = self.expr()?;
                let rat = self.pos;
                let rel = if self.eat_sym("==") {
                    Relation::Eq
                } else if self.eat_sym("<") {
                    Relation::Lt
                } else if self.eat_sym(">") {
                    Relation::Gt
                } else {
                    return Err(self.error("expected '==', '<' or '>'"));
                };
                let hat = self.pos;
                let rhs = self.expr()?;
                match (bare_ref(&lhs), bare_ref(&rhs)) {
                    (Some(a), Some(b)) => {
                        if rel != Relation::Eq {
                            return Err(self.error_at(rat, "objects can only be compared with '=='"));
                        }
                        if self.symbols[a] != self.symbols[b] {
                            return Err(self.error_at(hat, format!("cannot compare a {} with a {}", self.symbols[a].name(), self.symbols[b].name())));
                        }
                    }
                    (Some(a), None) => return Err(self.error_at(lat, format!("'{a}' is an object, not a number"))),
                    (None, Some(b)) => return Err(self.error_at(hat, format!("'{b}' is an object, not a number"))),
                    (None, None) => {}
                }
                (Stmt::Assert { lhs, rel, rhs }, vec![])
            }
            other => return Err(self.error_at(at, format!("unknown statement '{other}'"))),
        };
        self.finish()?;
        Ok(stmt)
    }

    fn fold(&mut self) -> PResult<(Stmt, Vec<(String, Kind)>)> {
        let aat = self.pos;
        let name = self.ident("an axiom O1..O6")?;
        let axiom = match name.as_str() {
            "O1" => Axiom::O1,
            "O2" => Axiom::O2,
            "O3" => Axiom::O3,
            "O4" => Axiom::O4,
            "O5" => Axiom::O5,
            "O6" => Axiom::O6,
            _ => return Err(self.error_at(aat, format!("unknown axiom '{name}'"))),
        };
        let args = match axiom {
            Axiom::O1 | Axiom::O3 => vec![self.reference(Kind::Point)?, self.reference(Kind::Point)?],
            Axiom::O2 | Axiom::O4 => vec![self.reference(Kind::Line)?, self.reference(Kind::Line)?],
            Axiom::O5 => {
                let p = self.reference(Kind::Point)?;
                self.expect_sym("->")?;
                let l = self.reference(Kind::Line)?;
                self.keyword("through")?;
                vec![p, l, self.reference(Kind::Point)?]
            }
            Axiom::O6 => {
                let p = self.reference(Kind::Point)?;
                self.expect_sym("->")?;
                let l = self.reference(Kind::Line)?;
                self.expect_sym(",")?;
                let q = self.reference(Kind::Point)?;
                self.expect_sym("->")?;
                vec![p, l, q, self.reference(Kind::Line)?]
            }
        };
        let max = match axiom {
            Axiom::O1 | Axiom::O2 | Axiom::O3 => 1,
            Axiom::O4 | Axiom::O5 => 2,
            Axiom::O6 => 3,
        };
        self.keyword("as")?;
        let mut binders = vec![self.binder(&[])?];
        while self.eat_sym(",") {
            if binders.len() == max {
                return Err(self.error(format!("{axiom} binds at most {max} name(s)")));
            }
            let b = self.binder(&binders)?;
            binders.push(b);
        }
        let optional = self.eat_sym("?");
        let kind = if axiom == Axiom::O2 { Kind::Point } else { Kind::Line };
        let bound = binders.iter().map(|b| (b.clone(), kind)).collect();
        Ok((Stmt::Fold { axiom, args, binders, optional }, bound))
    }
}

fn bare_ref(e: &Expr) -> Option<&str> {
    match e {
        Expr::Ref(s) => Some(s),
        _ => None,
    }
}

/// Parse and resolve a script: names must be bound before use and never rebound.
pub fn parse(text: &str) -> Result<Program, SourceError> {
    let mut symbols = HashMap::new();
    let mut statements = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = lex(line_no, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = Parser {
            line: line_no,
            end_column: line.chars().count() + 1,
            toks,
            pos: 0,
            symbols: &mut symbols,
            refs: true,
        };
        let (stmt, bound) = p.statement(statements.is_empty())?;
        for (name, kind) in bound {
            symbols.insert(name, kind);
        }
        statements.push(stmt);
        lines.push(line_no);
    }
    Ok(Program { statements, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> SourceError {
        parse(text).unwrap_err()
    }

    #[test]
    fn statement_shapes() {
        let p = parse("point A = (0, 0)").unwrap();
        assert_eq!(p.statements.len(), 1);
        assert!(matches!(&p.statements[0], Stmt::Point { name, .. } if name == "A"));

        let p = parse("point P = (0,1)\nline l = <0, 1, 1>\npoint Q = (1, 0)\nfold O5 P -> l through Q as f1, f2").unwrap();
        let Stmt::Fold { axiom, args, binders, optional } = &p.statements[3] else { panic!() };
        assert_eq!(*axiom, Axiom::O5);
        assert_eq!(args, &["P", "l", "Q"]);
        assert_eq!(binders, &["f1", "f2"]);
        assert!(!optional);

        let p = parse("point B = (sqrt(2), 1/3)").unwrap();
        let Stmt::Point { x, .. } = &p.statements[0] else { panic!() };
        assert_eq!(*x, Expr::Call(Func::Sqrt, vec![Expr::Num("2".into())]));
    }

    #[test]
    fn comments_and_levels() {
        let p = parse("# header\nlevel Euclidean   # trailing\n\npoint A = (1, 2) # note").unwrap();
        assert_eq!(p.level(), Some(Level::Euclidean));
        assert_eq!(p.lines, vec![2, 4]);
        let e = err("point A = (0, 0)\nlevel origami");
        assert_eq!((e.line, e.column), (2, 1));
        assert_eq!(err("level paper").token, "paper");
    }

    #[test]
    fn positions() {
        let e = err("point A = (0, 0)\nline l = through A B");
        assert_eq!((e.line, e.column, e.token.as_str()), (2, 20, "B"));
        assert!(e.message.contains("unknown identifier"));

        let e = err("point A = (0, 0)\npoint A = (1, 1)");
        assert_eq!((e.line, e.column), (2, 7));
        assert!(e.message.contains("already bound"));

        let e = err("point A = (0, 0)\npoint B = (1, 0)\nfold O7 A B as f");
        assert_eq!((e.line, e.column, e.token.as_str()), (3, 6, "O7"));

        let e = err("point A = (0, 0)\npoint B = (1, 0)\nfold O1 A as f");
        assert_eq!(e.token, "as");

        let e = err("point A = (0, 0)\npoint B = (1, 0)\nfold O1 A B as f, g");
        assert!(e.message.contains("at most 1"));

        let e = err("point A = (1 +, 0)");
        assert_eq!((e.column, e.token.as_str()), (15, ","));

        let e = err("point A = (1, 2");
        assert_eq!((e.column, e.token.as_str()), (16, ""));

        let e = err("point A = (1, 2) $");
        assert_eq!(e.token, "$");
    }

    #[test]
    fn kinds_are_checked() {
        let base = "point A = (0, 0)\npoint B = (1, 0)\nline l = through A B\n";
        assert!(err(&format!("{base}fold O4 A l as f")).message.contains("is a point"));
        assert!(err(&format!("{base}assert l.x == 0")).message.contains("no field"));
        assert!(err(&format!("{base}assert A == l")).message.contains("cannot compare"));
        assert!(err(&format!("{base}assert A < B")).message.contains("=="));
        assert!(err(&format!("{base}assert A == 1")).message.contains("not a number"));
        assert!(err(&format!("{base}point C = (A.x, 0)")).message.contains("not allowed"));
        assert!(err(&format!("{base}point sqrt = (1, 0)")).message.contains("reserved"));
        assert!(parse(&format!("{base}assert A == B\nassert slope(l) == 0\nassert -A.x^2 < 1")).is_ok());
    }

    #[test]
    fn pretty_is_a_fixed_point() {
        let src = "level reduced\npoint A = (-(1 - 2) - -3, 2^3 * (1/2)/4)\npoint B=(0.5,(sqrt(2)+1)^2)\n\
                   line l = through A B\nline m = <1, -1, 0>\npoint X = meet l m\n\
                   fold O6 A -> l, B -> m as t1, t2, t3?\nmacro scale A X B A as C\nassert -X.x * 2 == 1 - (2 - 3)\n";
        let p = parse(src).unwrap();
        let text = p.to_string();
        let q = parse(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(text, q.to_string());
        assert!(text.contains("fold O6 A -> l, B -> m as t1, t2, t3?"));
        assert!(text.contains("point A = (-(1 - 2) - -3, 2^3 * (1 / 2) / 4)"));
    }
}
