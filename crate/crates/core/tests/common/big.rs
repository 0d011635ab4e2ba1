//! Synthetic well-typed sources of a requested size for timing the checker.

/// A system of roughly `chars` characters: one locality per block, each
/// with a KLD table and a process that aggregates, selects, loops and
/// inserts.
pub fn synthetic_program(chars: usize) -> String {
    let mut out = String::with_capacity(chars + 1024);
    out.push_str("schema KLD : (String, String, String, String, String, Int, Int)\n");
    out.push_str("let restock(n: Int, u: Loc) := update(KLD@u, (!a, !b, !c, !d, !e, !f, !g), f < n, (a, b, c, d, e, f + n, g)).nil in\n");
    let mut i = 0usize;
    while out.len() < chars {
        if i > 0 {
            out.push_str("||\n");
        }
        out.push_str(&format!(
            "$l{i} :: table KLD : (String, String, String, String, String, Int, Int) = {{ (\"001\", \"HB\", \"2015\", \"red\", \"38\", 5, 2), (\"002\", \"SB\", \"2015\", \"green\", \"37\", 2, 0) }}\n\
             || $l{i} :: aggr(KLD@$l{i}, (!id, !tp, !yr, !cr, !sz, !is, !ss), tp = \"HB\" and ss >= 1, sum(7), (!res)).\n\
             select(KLD@$l{i}, (!id2, !tp2, !yr2, !cr2, !sz2, !is2, !ss2), ss2 < res, (cr2, ss2 * 2), !tb).\n\
             foreach(tb, (!c, !n), not (n = 0), asc(2)) {{ insert(KLD@$l{i}, (\"003\", \"SB\", \"2016\", c, \"39\", n, res + 1)).nil }};\n\
             restock({i} / 7 + 1, $l{i})\n"
        ));
        i += 1;
    }
    out
}
