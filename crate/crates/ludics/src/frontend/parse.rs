//! Recursive-descent parser for session files.
//!
//! One token of lookahead suffices everywhere. Definitions are validated
//! as they are read: names and arities against the declared signature when
//! the file opens with a `sig` block, against a file-wide inferred
//! signature otherwise, so an arity clash between two definitions is
//! reported at the second one with its exact position. References (in
//! `multi`, `bench`, and `assign` items) must point at names already
//! defined above; forward references are unknown names.

use std::collections::{BTreeMap, BTreeSet};

use super::lex::{lex, Tok, Token};
use super::{Item, MultiMember, ParseError, SessionFile};
use crate::conn::{validate_connective, Connective, NegAction};
use crate::multi::MultiDesign;
use crate::ortho::{Tester, Workbench};
use crate::path::{AjSequence, LocatedAction};
use crate::term::{Branch, Design, Name, Polarity, Var};

pub fn parse_session(text: &str) -> Result<SessionFile, ParseError> {
    let tokens = lex(text)?;
    let parser = Parser {
        tokens,
        pos: 0,
        file: SessionFile {
            signature: crate::term::Signature::new(),
            sig_declared: false,
            items: Vec::new(),
        },
    };
    parser.run()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    file: SessionFile,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek_word(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn syntax(&self, expected: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.into(),
            found: t.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.syntax(expected))
        }
    }

    /// An identifier token; returns its text and position.
    fn ident(&mut self, expected: &str) -> Result<(String, usize, usize), ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                let t = self.advance();
                Ok((s, t.line, t.col))
            }
            _ => Err(self.syntax(expected)),
        }
    }

    /// A specific keyword identifier.
    fn word(&mut self, word: &str) -> Result<(), ParseError> {
        if self.peek_word(word) {
            self.advance();
            Ok(())
        } else {
            Err(self.syntax(format!("`{word}`")))
        }
    }

    fn int(&mut self, expected: &str) -> Result<usize, ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.syntax(expected)),
        }
    }

    /// Checks a used name against the declared signature, or grows the
    /// inferred one. Every action name in the file flows through here, so
    /// arities agree file-wide.
    fn check_name(
        &mut self,
        name: &str,
        args: usize,
        line: usize,
        col: usize,
    ) -> Result<(), ParseError> {
        let n = Name::new(name);
        match self.file.signature.arity(&n) {
            Some(k) if k != args => Err(ParseError::Arity {
                line,
                col,
                name: name.into(),
                want: k,
                got: args,
            }),
            Some(_) => Ok(()),
            None if self.file.sig_declared => Err(ParseError::UnknownName {
                line,
                col,
                name: name.into(),
                context: "not in the signature".into(),
            }),
            None => {
                self.file.signature.insert(n, args);
                Ok(())
            }
        }
    }

    fn kind_of(&self, name: &str) -> Option<&'static str> {
        self.file.items.iter().find_map(|it| match it {
            Item::Design { name: n, .. } if n == name => Some("design"),
            Item::Conn { name: n, .. } if n == name => Some("connective"),
            Item::Seq { name: n, .. } if n == name => Some("sequence"),
            Item::Multi { name: n, .. } if n == name => Some("multi-design"),
            Item::Bench { name: n, .. } if n == name => Some("bench"),
            _ => None,
        })
    }

    fn check_fresh(&self, name: &str, line: usize, col: usize) -> Result<(), ParseError> {
        if self.kind_of(name).is_some() {
            Err(ParseError::Duplicate { line, col, name: name.into() })
        } else {
            Ok(())
        }
    }

    fn unknown_or_kind(
        &self,
        name: &str,
        line: usize,
        col: usize,
        want: &str,
    ) -> ParseError {
        match self.kind_of(name) {
            Some(kind) => ParseError::Invalid {
                line,
                col,
                msg: format!("`{name}` is a {kind}, not a {want}"),
            },
            None => ParseError::UnknownName {
                line,
                col,
                name: name.into(),
                context: format!("no {want} with this name is defined above"),
            },
        }
    }

    fn lookup_design(
        &self,
        name: &str,
        line: usize,
        col: usize,
    ) -> Result<Design, ParseError> {
        self.file
            .design(name)
            .cloned()
            .ok_or_else(|| self.unknown_or_kind(name, line, col, "design"))
    }

    // ===== items =====

    fn run(mut self) -> Result<SessionFile, ParseError> {
        if self.peek_word("sig") {
            self.sig_block()?;
        }
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => break,
                Tok::Ident(kw) => match kw.as_str() {
                    "design" => self.design_def()?,
                    "conn" => self.conn_def()?,
                    "seq" => self.seq_def()?,
                    "multi" => self.multi_def()?,
                    "bench" => self.bench_def()?,
                    "assign" => self.assign_dir()?,
                    "sig" => {
                        return Err(ParseError::Invalid {
                            line: t.line,
                            col: t.col,
                            msg: "the signature block must be the first item".into(),
                        })
                    }
                    _ => {
                        return Err(self.syntax(
                            "`design`, `conn`, `seq`, `multi`, `bench`, or `assign`",
                        ))
                    }
                },
                _ => {
                    return Err(self.syntax(
                        "`design`, `conn`, `seq`, `multi`, `bench`, or `assign`",
                    ))
                }
            }
        }
        Ok(self.file)
    }

    fn sig_block(&mut self) -> Result<(), ParseError> {
        self.advance();
        self.expect(Tok::LBrace, "`{`")?;
        while !self.eat(&Tok::RBrace) {
            let (name, line, col) = self.ident("a signature name or `}`")?;
            self.expect(Tok::Slash, "`/`")?;
            let arity = self.int("an arity")?;
            let n = Name::new(&name);
            if self.file.signature.contains(&n) {
                return Err(ParseError::Duplicate { line, col, name });
            }
            self.file.signature.insert(n, arity);
            self.eat(&Tok::Comma);
        }
        self.file.sig_declared = true;
        Ok(())
    }

    fn design_def(&mut self) -> Result<(), ParseError> {
        self.advance();
        let (name, line, col) = self.ident("a design name")?;
        self.check_fresh(&name, line, col)?;
        self.expect(Tok::Eq, "`=`")?;
        let value = self.design()?;
        self.file.items.push(Item::Design { name, value });
        Ok(())
    }

    // ===== designs =====

    fn design(&mut self) -> Result<Design, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if s == "daimon" => {
                self.advance();
                Ok(Design::Daimon)
            }
            Tok::Ident(s) if s == "omega" => {
                self.advance();
                Ok(Design::Omega)
            }
            Tok::Ident(s) => {
                self.advance();
                self.app_suffix(Design::var(s))
            }
            Tok::LBrace => {
                let sum = self.sum()?;
                self.app_suffix(sum)
            }
            _ => Err(self.syntax("`daimon`, `omega`, a variable, or `{`")),
        }
    }

    /// `head` is a variable or a sum; an optional `|name<args>` turns it
    /// into an application (a cut, when the head is a sum).
    fn app_suffix(&mut self, head: Design) -> Result<Design, ParseError> {
        if !self.eat(&Tok::Pipe) {
            return Ok(head);
        }
        let (name, line, col) = self.ident("an action name")?;
        self.expect(Tok::LAngle, "`<`")?;
        let mut args = Vec::new();
        if !self.eat(&Tok::RAngle) {
            loop {
                let at = self.peek().clone();
                let arg = self.design()?;
                if arg.is_positive() {
                    return Err(ParseError::Invalid {
                        line: at.line,
                        col: at.col,
                        msg: "application arguments must be negative".into(),
                    });
                }
                args.push(arg);
                if self.eat(&Tok::Comma) {
                    continue;
                }
                self.expect(Tok::RAngle, "`,` or `>`")?;
                break;
            }
        }
        self.check_name(&name, args.len(), line, col)?;
        Ok(Design::App {
            head: Box::new(head),
            name: Name::new(name),
            args,
        })
    }

    fn sum(&mut self) -> Result<Design, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut branches: BTreeMap<Name, Branch> = BTreeMap::new();
        if self.eat(&Tok::RBrace) {
            return Ok(Design::empty_sum());
        }
        loop {
            let (bname, bline, bcol) = self.ident("a branch name")?;
            self.expect(Tok::LParen, "`(`")?;
            let mut params = Vec::new();
            let mut seen = BTreeSet::new();
            if !self.eat(&Tok::RParen) {
                loop {
                    let (v, vline, vcol) = self.ident("a binder variable")?;
                    if v == "x0" {
                        return Err(ParseError::Invalid {
                            line: vline,
                            col: vcol,
                            msg: "x0 is reserved for the atomic address and may not be bound"
                                .into(),
                        });
                    }
                    if !seen.insert(v.clone()) {
                        return Err(ParseError::Invalid {
                            line: vline,
                            col: vcol,
                            msg: format!("binder {v} is listed twice"),
                        });
                    }
                    params.push(Var::new(v));
                    if self.eat(&Tok::Comma) {
                        continue;
                    }
                    self.expect(Tok::RParen, "`,` or `)`")?;
                    break;
                }
            }
            self.check_name(&bname, params.len(), bline, bcol)?;
            self.expect(Tok::FatArrow, "`=>`")?;
            let at = self.peek().clone();
            let body = self.design()?;
            if body.is_negative() {
                return Err(ParseError::Invalid {
                    line: at.line,
                    col: at.col,
                    msg: "branch body must be positive".into(),
                });
            }
            let n = Name::new(&bname);
            if branches.contains_key(&n) {
                return Err(ParseError::Invalid {
                    line: bline,
                    col: bcol,
                    msg: format!("branch {bname} appears twice in one sum"),
                });
            }
            // Sums are stored sparsely: an explicit omega branch means the
            // same as leaving the name out.
            if body != Design::Omega {
                branches.insert(n, Branch::new(params, body));
            }
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RBrace, "`,` or `}`")?;
            break;
        }
        Ok(Design::sum(branches))
    }

    // ===== connectives =====

    fn conn_def(&mut self) -> Result<(), ParseError> {
        self.advance();
        let (name, line, col) = self.ident("a connective name")?;
        self.check_fresh(&name, line, col)?;
        self.expect(Tok::Eq, "`=`")?;
        self.expect(Tok::LParen, "`(`")?;
        let mut bound = Vec::new();
        while !matches!(self.peek().tok, Tok::Semi) {
            let (v, ..) = self.ident("a bound variable or `;`")?;
            bound.push(v);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Semi, "`;`")?;
        self.word("I")?;
        self.expect(Tok::Eq, "`=`")?;
        let intro = self.action_set()?;
        self.expect(Tok::Semi, "`;`")?;
        self.word("E")?;
        self.expect(Tok::Eq, "`=`")?;
        let elim = self.action_set()?;
        self.expect(Tok::RParen, "`)`")?;

        for (a, aline, acol) in intro.iter().chain(&elim) {
            self.check_name(a.name.as_str(), a.arity(), *aline, *acol)?;
        }
        let value = Connective::new(
            name.clone(),
            bound.iter().map(String::as_str).collect(),
            intro.into_iter().map(|(a, ..)| a).collect(),
            elim.into_iter().map(|(a, ..)| a).collect(),
        );
        let sig = if self.file.sig_declared {
            self.file.signature.clone()
        } else {
            value.signature()
        };
        validate_connective(&value, &sig).map_err(|e| ParseError::Invalid {
            line,
            col,
            msg: e.to_string(),
        })?;
        self.file.items.push(Item::Conn { name, value });
        Ok(())
    }

    fn action_set(&mut self) -> Result<Vec<(NegAction, usize, usize)>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            let (name, line, col) = self.ident("an action name")?;
            self.expect(Tok::LParen, "`(`")?;
            let mut args = Vec::new();
            if !self.eat(&Tok::RParen) {
                loop {
                    let (v, ..) = self.ident("a variable")?;
                    args.push(v);
                    if self.eat(&Tok::Comma) {
                        continue;
                    }
                    self.expect(Tok::RParen, "`,` or `)`")?;
                    break;
                }
            }
            out.push((
                NegAction::new(name, args.iter().map(String::as_str).collect()),
                line,
                col,
            ));
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RBrace, "`,` or `}`")?;
            break;
        }
        Ok(out)
    }

    // ===== sequences =====

    fn seq_def(&mut self) -> Result<(), ParseError> {
        self.advance();
        let (name, line, col) = self.ident("a sequence name")?;
        self.check_fresh(&name, line, col)?;
        self.expect(Tok::Eq, "`=`")?;
        self.expect(Tok::LBracket, "`[`")?;
        let mut acts: Vec<(LocatedAction, usize, usize)> = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                acts.push(self.seq_action()?);
                if self.eat(&Tok::Comma) {
                    continue;
                }
                self.expect(Tok::RBracket, "`,` or `]`")?;
                break;
            }
        }
        let value = AjSequence::from_actions(acts.iter().map(|(a, ..)| a.clone()).collect())
            .map_err(|e| {
                let (l, c) = acts
                    .get(e.index)
                    .map(|(_, l, c)| (*l, *c))
                    .unwrap_or((line, col));
                ParseError::Invalid { line: l, col: c, msg: e.to_string() }
            })?;
        self.file.items.push(Item::Seq { name, value });
        Ok(())
    }

    /// `daimon`, `x|a<ys>`, or `a^x(ys)`.
    fn seq_action(&mut self) -> Result<(LocatedAction, usize, usize), ParseError> {
        let (first, line, col) =
            self.ident("`daimon`, an address variable, or an action name")?;
        if first == "daimon" {
            return Ok((LocatedAction::daimon(), line, col));
        }
        if self.eat(&Tok::Pipe) {
            let (name, nline, ncol) = self.ident("an action name")?;
            let args = self.var_list(Tok::LAngle, Tok::RAngle, "`,` or `>`")?;
            self.check_name(&name, args.len(), nline, ncol)?;
            Ok((
                LocatedAction::pos(&first, &name, args.iter().map(String::as_str)),
                line,
                col,
            ))
        } else if self.eat(&Tok::Caret) {
            let (addr, ..) = self.ident("an address variable")?;
            let args = self.var_list(Tok::LParen, Tok::RParen, "`,` or `)`")?;
            self.check_name(&first, args.len(), line, col)?;
            Ok((
                LocatedAction::neg(&addr, &first, args.iter().map(String::as_str)),
                line,
                col,
            ))
        } else {
            Err(self.syntax("`|` or `^`"))
        }
    }

    fn var_list(
        &mut self,
        open: Tok,
        close: Tok,
        inner: &str,
    ) -> Result<Vec<String>, ParseError> {
        self.expect(open, "an argument list")?;
        let mut out = Vec::new();
        if self.eat(&close) {
            return Ok(out);
        }
        loop {
            let (v, ..) = self.ident("a variable")?;
            out.push(v);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(close, inner)?;
            break;
        }
        Ok(out)
    }

    // ===== multi-designs =====

    fn multi_def(&mut self) -> Result<(), ParseError> {
        self.advance();
        let (name, line, col) = self.ident("a multi-design name")?;
        self.check_fresh(&name, line, col)?;
        self.expect(Tok::Eq, "`=`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut members = Vec::new();
        let mut positive: Option<Design> = None;
        let mut bindings: BTreeMap<Var, Design> = BTreeMap::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                if self.eat(&Tok::LBracket) {
                    let (dname, dline, dcol) = self.ident("a design name")?;
                    self.expect(Tok::Slash, "`/`")?;
                    let (place, pline, pcol) = self.ident("a place variable")?;
                    self.expect(Tok::RBracket, "`]`")?;
                    let d = self.lookup_design(&dname, dline, dcol)?;
                    if d.is_positive() {
                        return Err(ParseError::Invalid {
                            line: dline,
                            col: dcol,
                            msg: format!("binding {place} must hold a negative design"),
                        });
                    }
                    let v = Var::new(&place);
                    if bindings.contains_key(&v) {
                        return Err(ParseError::Invalid {
                            line: pline,
                            col: pcol,
                            msg: format!("place {place} is bound twice"),
                        });
                    }
                    bindings.insert(v.clone(), d);
                    members.push(MultiMember::Binding(v, dname));
                } else {
                    let (dname, dline, dcol) = self.ident("a design name or `[`")?;
                    let d = self.lookup_design(&dname, dline, dcol)?;
                    if d.is_negative() {
                        return Err(ParseError::Invalid {
                            line: dline,
                            col: dcol,
                            msg: format!(
                                "a negative member needs a place: write [{dname}/x]"
                            ),
                        });
                    }
                    if positive.is_some() {
                        return Err(ParseError::Invalid {
                            line: dline,
                            col: dcol,
                            msg: "a multi-design has at most one positive member".into(),
                        });
                    }
                    positive = Some(d);
                    members.push(MultiMember::Positive(dname));
                }
                if self.eat(&Tok::Comma) {
                    continue;
                }
                self.expect(Tok::RBrace, "`,` or `}`")?;
                break;
            }
        }
        let value = MultiDesign::new(positive, bindings).map_err(|e| ParseError::Invalid {
            line,
            col,
            msg: e.to_string(),
        })?;
        self.file.items.push(Item::Multi { name, members, value });
        Ok(())
    }

    // ===== benches =====

    fn bench_def(&mut self) -> Result<(), ParseError> {
        self.advance();
        let (name, line, col) = self.ident("a bench name")?;
        self.check_fresh(&name, line, col)?;
        self.expect(Tok::Eq, "`=`")?;
        let (pword, pline, pcol) = self.ident("`pos` or `neg`")?;
        let polarity = match pword.as_str() {
            "pos" => Polarity::Pos,
            "neg" => Polarity::Neg,
            _ => {
                return Err(ParseError::Syntax {
                    line: pline,
                    col: pcol,
                    expected: "`pos` or `neg`".into(),
                    found: format!("`{pword}`"),
                })
            }
        };
        self.word("gens")?;
        let gens = self.name_list()?;
        self.word("testers")?;
        let testers = self.name_list()?;

        let mut generators = Vec::new();
        for (g, gline, gcol) in &gens {
            let d = self.lookup_design(g, *gline, *gcol)?;
            if d.polarity() != polarity {
                return Err(ParseError::Invalid {
                    line: *gline,
                    col: *gcol,
                    msg: format!(
                        "generator {g} is {} but the bench is {}",
                        d.polarity(),
                        polarity
                    ),
                });
            }
            generators.push(d);
        }
        let mut tester_values = Vec::new();
        for (t, tline, tcol) in &testers {
            if let Some(d) = self.file.design(t) {
                if d.polarity() != polarity.flip() {
                    return Err(ParseError::Invalid {
                        line: *tline,
                        col: *tcol,
                        msg: format!(
                            "tester {t} is {} but generators of a {} bench need {} testers",
                            d.polarity(),
                            polarity,
                            polarity.flip()
                        ),
                    });
                }
                tester_values.push(Tester::Design(d.clone()));
            } else if let Some(m) = self.file.multi(t) {
                tester_values.push(Tester::Anti(m.clone()));
            } else {
                return Err(self.unknown_or_kind(t, *tline, *tcol, "design or multi-design"));
            }
        }
        let value = Workbench {
            polarity,
            generators,
            testers: tester_values,
            label: name.clone(),
        };
        self.file.items.push(Item::Bench {
            name,
            gens: gens.into_iter().map(|(g, ..)| g).collect(),
            testers: testers.into_iter().map(|(t, ..)| t).collect(),
            value,
        });
        Ok(())
    }

    fn name_list(&mut self) -> Result<Vec<(String, usize, usize)>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            out.push(self.ident("a defined name")?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RBrace, "`,` or `}`")?;
            break;
        }
        Ok(out)
    }

    // ===== bench assignments =====

    fn assign_dir(&mut self) -> Result<(), ParseError> {
        self.advance();
        let (cname, cline, ccol) = self.ident("a connective name")?;
        let arity = match self.file.connective(&cname) {
            Some(c) => c.arity(),
            None => return Err(self.unknown_or_kind(&cname, cline, ccol, "connective")),
        };
        if self.file.assignment(&cname).is_some() {
            return Err(ParseError::Duplicate { line: cline, col: ccol, name: cname });
        }
        self.word("neg")?;
        let neg = self.bench_list(Polarity::Neg)?;
        self.word("pos")?;
        let pos = self.bench_list(Polarity::Pos)?;
        for (side, list) in [("negative", &neg), ("positive", &pos)] {
            if list.len() != arity {
                return Err(ParseError::Invalid {
                    line: cline,
                    col: ccol,
                    msg: format!(
                        "`{cname}` needs {arity} {side} benches, got {}",
                        list.len()
                    ),
                });
            }
        }
        self.file.items.push(Item::Assign { conn: cname, neg, pos });
        Ok(())
    }

    fn bench_list(&mut self, polarity: Polarity) -> Result<Vec<String>, ParseError> {
        let names = self.name_list()?;
        for (b, bline, bcol) in &names {
            match self.file.bench(b) {
                None => return Err(self.unknown_or_kind(b, *bline, *bcol, "bench")),
                Some(w) if w.polarity != polarity => {
                    return Err(ParseError::Invalid {
                        line: *bline,
                        col: *bcol,
                        msg: format!("bench {b} is {} but this slot needs {polarity}", w.polarity),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(names.into_iter().map(|(b, ..)| b).collect())
    }
}
