//! S-expression surface syntax.
//!
//! ```text
//! e ::= n | true | false | "str" | () | x
//!     | (prin a) | (prins a b ...) | (list e ...) | (tuple e ...)
//!     | (as_par e e) | (as_sec e e) | (seal e e) | (reveal e)
//!     | (mkmap e e) | (project e e) | (concat e e) | (ffi f e ...)
//!     | (let x e e) | (lam x ... e) | (fix f x e) | (app e e ...) | (if e e e)
//! ```
//!
//! `;` starts a comment running to the end of the line. `(lam x y e)` and
//! `(app f a b)` are curried. List and tuple forms with non-constant elements
//! build their value with `cons`/`nil`/`pair`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::lang::{Expr, PrinSet, Principal, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected {}", self.line, self.col, self.expected)
    }
}

const HEADS: &[&str] = &[
    "as_par", "as_sec", "seal", "reveal", "ffi", "mkmap", "project", "concat", "let", "lam", "fix",
    "if", "app", "prin", "prins", "list", "tuple",
];

#[derive(Clone, Debug)]
enum Sexp {
    Atom(Atom, Pos),
    List(Vec<Sexp>, Pos),
}

#[derive(Clone, Debug)]
enum Atom {
    Int(i64),
    Str(String),
    Sym(String),
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: Pos, expected: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line: pos.line,
        col: pos.col,
        expected: expected.into(),
    })
}

struct Lexer<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, col: 1 },
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn sexp(&mut self) -> Result<Sexp, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => err(start, "an expression"),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        None => return err(self.pos, "`)`"),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.sexp()?),
                    }
                }
            }
            Some(')') => err(start, "an expression"),
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return err(self.pos, "closing `\"`"),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return err(self.pos, "an escape sequence"),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Ok(Sexp::Atom(Atom::Str(s), start))
            }
            Some(_) => {
                let mut tok = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                        break;
                    }
                    tok.push(c);
                    self.bump();
                }
                let digits = tok.strip_prefix('-').unwrap_or(&tok);
                if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                    return match tok.parse() {
                        Ok(n) => Ok(Sexp::Atom(Atom::Int(n), start)),
                        Err(_) => err(start, "an integer in 64-bit range"),
                    };
                }
                if !is_ident(&tok) {
                    return err(start, "an identifier");
                }
                Ok(Sexp::Atom(Atom::Sym(tok), start))
            }
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses one expression; trailing input other than comments is an error.
pub fn parse_program(text: &str) -> Result<Expr, ParseError> {
    let mut lx = Lexer::new(text);
    let s = lx.sexp()?;
    lx.skip_ws();
    if lx.chars.peek().is_some() {
        return err(lx.pos, "end of input");
    }
    expr(&s)
}

fn var(s: &Sexp) -> Result<String, ParseError> {
    match s {
        Sexp::Atom(Atom::Sym(x), p) => {
            if HEADS.contains(&x.as_str()) || x == "true" || x == "false" {
                err(*p, "a variable name")
            } else {
                Ok(x.clone())
            }
        }
        other => err(other.pos(), "a variable name"),
    }
}

fn name(s: &Sexp) -> Result<String, ParseError> {
    match s {
        Sexp::Atom(Atom::Sym(x), _) => Ok(x.clone()),
        other => err(other.pos(), "a name"),
    }
}

fn arity(head: &str, pos: Pos, args: &[Sexp], n: usize) -> Result<(), ParseError> {
    if args.len() != n {
        return err(pos, format!("`{head}` with {n} arguments"));
    }
    Ok(())
}

fn expr(s: &Sexp) -> Result<Expr, ParseError> {
    match s {
        Sexp::Atom(Atom::Int(n), _) => Ok(Expr::int(*n)),
        Sexp::Atom(Atom::Str(x), _) => Ok(Expr::Const(Value::Str(x.clone()))),
        Sexp::Atom(Atom::Sym(x), p) => match x.as_str() {
            "true" => Ok(Expr::bool(true)),
            "false" => Ok(Expr::bool(false)),
            _ => var(&Sexp::Atom(Atom::Sym(x.clone()), *p)).map(Expr::Var),
        },
        Sexp::List(items, pos) => {
            let Some((head, args)) = items.split_first() else {
                return Ok(Expr::Const(Value::Unit));
            };
            let Sexp::Atom(Atom::Sym(h), _) = head else {
                return err(head.pos(), "a form name");
            };
            let pos = *pos;
            let two = |f: fn(Expr, Expr) -> Expr| -> Result<Expr, ParseError> {
                arity(h, pos, args, 2)?;
                Ok(f(expr(&args[0])?, expr(&args[1])?))
            };
            match h.as_str() {
                "as_par" => two(Expr::as_par),
                "as_sec" => two(Expr::as_sec),
                "seal" => two(Expr::seal),
                "mkmap" => two(Expr::mkmap),
                "project" => two(Expr::project),
                "concat" => two(Expr::concat),
                "reveal" => {
                    arity(h, pos, args, 1)?;
                    Ok(Expr::reveal(expr(&args[0])?))
                }
                "ffi" => {
                    let Some((f, rest)) = args.split_first() else {
                        return err(pos, "`ffi` with a function name");
                    };
                    let f = name(f)?;
                    let rest = rest.iter().map(expr).collect::<Result<Vec<_>, _>>()?;
                    Ok(Expr::ffi(&f, rest))
                }
                "let" => {
                    arity(h, pos, args, 3)?;
                    Ok(Expr::let_(&var(&args[0])?, expr(&args[1])?, expr(&args[2])?))
                }
                "lam" => {
                    if args.len() < 2 {
                        return err(pos, "`lam` with a parameter and a body");
                    }
                    let (body, params) = args.split_last().unwrap();
                    let mut e = expr(body)?;
                    for x in params.iter().rev() {
                        e = Expr::lam(&var(x)?, e);
                    }
                    Ok(e)
                }
                "fix" => {
                    arity(h, pos, args, 3)?;
                    Ok(Expr::fix(&var(&args[0])?, &var(&args[1])?, expr(&args[2])?))
                }
                "app" => {
                    if args.len() < 2 {
                        return err(pos, "`app` with a function and an argument");
                    }
                    let mut e = expr(&args[0])?;
                    for a in &args[1..] {
                        e = Expr::app(e, expr(a)?);
                    }
                    Ok(e)
                }
                "if" => {
                    arity(h, pos, args, 3)?;
                    Ok(Expr::if_(expr(&args[0])?, expr(&args[1])?, expr(&args[2])?))
                }
                "prin" => {
                    arity(h, pos, args, 1)?;
                    Ok(Expr::Const(Value::Prin(Principal::new(name(&args[0])?))))
                }
                "prins" => {
                    if args.is_empty() {
                        return err(pos, "`prins` with at least one principal");
                    }
                    let s = args
                        .iter()
                        .map(|a| name(a).map(Principal::new))
                        .collect::<Result<PrinSet, _>>()?;
                    Ok(Expr::Const(Value::Prins(s)))
                }
                "list" => {
                    let es = args.iter().map(expr).collect::<Result<Vec<_>, _>>()?;
                    match literals(&es) {
                        Some(vs) => Ok(Expr::Const(Value::List(vs))),
                        None => Ok(es.into_iter().rev().fold(Expr::ffi("nil", Vec::new()), |tl, hd| {
                            Expr::ffi("cons", alloc::vec![hd, tl])
                        })),
                    }
                }
                "tuple" => {
                    let es = args.iter().map(expr).collect::<Result<Vec<_>, _>>()?;
                    match literals(&es) {
                        Some(vs) => Ok(Expr::Const(Value::Tuple(vs))),
                        None if es.len() == 2 => Ok(Expr::ffi("pair", es)),
                        None => err(pos, "a pair or a tuple of constants"),
                    }
                }
                _ => err(head.pos(), format!("a known form, not `{h}`")),
            }
        }
    }
}

fn literals(es: &[Expr]) -> Option<Vec<Value>> {
    es.iter()
        .map(|e| match e {
            Expr::Const(v) => Some(v.clone()),
            _ => None,
        })
        .collect()
}

/// Renders an expression in the surface syntax. Constants must be literals.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    print_into(e, &mut out);
    out
}

fn print_value(v: &Value, out: &mut String) {
    match v {
        Value::Int(n) => out.push_str(&n.to_string()),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Unit => out.push_str("()"),
        Value::Str(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    c => out.push(c),
                }
            }
            out.push('"');
        }
        Value::Prin(p) => out.push_str(&format!("(prin {p})")),
        Value::Prins(s) => {
            out.push_str("(prins");
            for p in s {
                out.push(' ');
                out.push_str(p.name());
            }
            out.push(')');
        }
        Value::List(vs) | Value::Tuple(vs) => {
            out.push_str(if matches!(v, Value::List(_)) { "(list" } else { "(tuple" });
            for x in vs {
                out.push(' ');
                print_value(x, out);
            }
            out.push(')');
        }
        other => out.push_str(&format!("#<{other}>")),
    }
}

fn print_into(e: &Expr, out: &mut String) {
    let form = |out: &mut String, head: &str, args: &[&Arc<Expr>]| {
        out.push('(');
        out.push_str(head);
        for a in args {
            out.push(' ');
            print_into(a, out);
        }
        out.push(')');
    };
    match e {
        Expr::Const(v) => print_value(v, out),
        Expr::Var(x) => out.push_str(x),
        Expr::AsPar(a, b) => form(out, "as_par", &[a, b]),
        Expr::AsSec(a, b) => form(out, "as_sec", &[a, b]),
        Expr::Seal(a, b) => form(out, "seal", &[a, b]),
        Expr::Reveal(a) => form(out, "reveal", &[a]),
        Expr::MkMap(a, b) => form(out, "mkmap", &[a, b]),
        Expr::Project(a, b) => form(out, "project", &[a, b]),
        Expr::Concat(a, b) => form(out, "concat", &[a, b]),
        Expr::App(a, b) => form(out, "app", &[a, b]),
        Expr::If(a, b, c) => form(out, "if", &[a, b, c]),
        Expr::Ffi(f, args) => {
            let head = format!("ffi {f}");
            form(out, &head, &args.iter().collect::<Vec<_>>())
        }
        Expr::Let(x, a, b) => {
            let head = format!("let {x}");
            form(out, &head, &[a, b])
        }
        Expr::Lam(x, b) => {
            let head = format!("lam {x}");
            form(out, &head, &[b])
        }
        Expr::Fix(f, x, b) => {
            let head = format!("fix {f} {x}");
            form(out, &head, &[b])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_parse() {
        assert_eq!(parse_program("5"), Ok(Expr::int(5)));
        assert_eq!(parse_program("-5"), Ok(Expr::int(-5)));
        assert_eq!(parse_program("()"), Ok(Expr::Const(Value::Unit)));
        assert_eq!(parse_program("(prins b a)"), Ok(Expr::prins(&["a", "b"])));
        assert_eq!(
            parse_program("(list 1 2)"),
            Ok(Expr::Const(Value::int_list(&[1, 2])))
        );
        assert_eq!(
            parse_program("(list x)"),
            Ok(Expr::ffi("cons", alloc::vec![Expr::var("x"), Expr::ffi("nil", alloc::vec![])]))
        );
    }

    #[test]
    fn forms_parse() {
        let e = parse_program("(as_sec (prins a b) (lam _ (ffi gt (reveal x) (reveal y))))").unwrap();
        let want = Expr::as_sec(
            Expr::prins(&["a", "b"]),
            Expr::thunk(Expr::ffi(
                "gt",
                alloc::vec![Expr::reveal(Expr::var("x")), Expr::reveal(Expr::var("y"))],
            )),
        );
        assert_eq!(e, want);
        let e = parse_program("(app f 1 2) ; comment").unwrap();
        assert_eq!(e, Expr::app(Expr::app(Expr::var("f"), Expr::int(1)), Expr::int(2)));
    }

    #[test]
    fn parse_errors() {
        let e = parse_program("(as_sec)").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        assert!(parse_program("(frob 1)").is_err());
        assert!(parse_program("(let if 1 2)").is_err());
        assert!(parse_program("(reveal x").is_err());
        assert!(parse_program("1 2").is_err());
        let e = parse_program("\n  (seal (prins a))").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }

    #[test]
    fn print_round_trips() {
        let src = "(let x (seal (prins a) (tuple 1 \"s\\\"\")) (lam y z (if true (project (prin a) (mkmap (prins a) x)) (fix f n (app f n)))))";
        let e = parse_program(src).unwrap();
        assert_eq!(parse_program(&print_expr(&e)), Ok(e));
    }
}
