import random

import pytest
from hypothesis import given, settings, strategies as st

from chainline.errors import TemplateError
from chainline.template import (
    PLAIN_DELIMITERS,
    SOLIDITY_DELIMITERS,
    InvertedSection,
    Section,
    TemplateAst,
    Text,
    Variable,
    delimiters_for_path,
    parse_template,
    render,
    render_file,
    render_string,
)

from support import (
    ast_of,
    delete_sections,
    nodes_to_source,
    random_context,
    random_template_nodes,
)

ROLE_FUNCTION_BLOCK = """/* #AddRoleDynamically */
function addRoleToP(address _p, string _rName) public {
   [...]
}
/* /AddRoleDynamically */
"""


class TestParse:
    def test_plain_dialect_baseline(self):
        ast = parse_template("{{a}}{{#s}}{{b}}{{/s}}")
        assert ast.nodes == (
            Variable("a"),
            Section("s", (Variable("b"),)),
        )

    def test_empty_source(self):
        assert parse_template("").nodes == ()

    def test_comment_wrapped_section(self):
        ast = parse_template(
            "/* #AddRoleDynamically */ body /* /AddRoleDynamically */",
            SOLIDITY_DELIMITERS,
        )
        assert ast.nodes == (Section("AddRoleDynamically", (Text(" body "),)),)

    def test_comment_wrapped_spacing_variants(self):
        for source in ("/*#K*/x/*/K*/", "/* #K */x/* /K */"):
            ast = parse_template(source, SOLIDITY_DELIMITERS)
            assert ast.nodes == (Section("K", (Text("x"),)),)

    def test_real_comments_stay_literal(self):
        source = "a /* not a tag! */ b /* two words */ c"
        ast = parse_template(source, SOLIDITY_DELIMITERS)
        assert ast.nodes == (Text(source),)

    def test_unterminated_comment_stays_literal(self):
        ast = parse_template("x /* dangling", SOLIDITY_DELIMITERS)
        assert ast.nodes == (Text("x /* dangling"),)

    def test_unclosed_section_reports_key_and_line(self):
        with pytest.raises(TemplateError, match="'s' is never closed") as err:
            parse_template("line1\n{{#s}}\ntext")
        assert err.value.line == 2

    def test_close_without_open(self):
        with pytest.raises(TemplateError, match="without an open section"):
            parse_template("{{/s}}")

    def test_mismatched_close_key(self):
        with pytest.raises(TemplateError, match="does not match"):
            parse_template("{{#outer}}{{#inner}}{{/outer}}{{/inner}}")

    def test_malformed_plain_payload_rejected(self):
        with pytest.raises(TemplateError, match="malformed tag payload"):
            parse_template("{{not a key}}")

    def test_unclosed_plain_tag_rejected(self):
        with pytest.raises(TemplateError, match="never closed"):
            parse_template("text {{key")

    def test_delimiters_for_path(self):
        assert delimiters_for_path("x/Factory.sol.tpl") is SOLIDITY_DELIMITERS
        assert delimiters_for_path("x/page.stub.tpl") is PLAIN_DELIMITERS


class TestRenderVariables:
    def test_missing_key_renders_empty(self):
        assert render_string("[{{ghost}}]", {}) == "[]"

    def test_booleans_render_lowercase(self):
        assert render_string("{{a}}/{{b}}", {"a": True, "b": False}) == "true/false"

    def test_numbers_render_shortest(self):
        assert render_string("{{n}} {{x}}", {"n": 42, "x": 2.5}) == "42 2.5"

    def test_strings_render_raw(self):
        assert render_string("{{s}}", {"s": "<&>{}"}) == "<&>{}"


class TestRenderSections:
    def test_boolean_gate(self):
        ast = parse_template(ROLE_FUNCTION_BLOCK, SOLIDITY_DELIMITERS, trim_standalone=True)
        on = render(ast, {"AddRoleDynamically": True})
        off = render(ast, {"AddRoleDynamically": False})
        assert "function addRoleToP" in on
        assert "/*" not in on
        assert off == ""

    def test_list_iteration(self):
        assert render_string("{{#xs}}{{n}},{{/xs}}", {"xs": [{"n": 1}, {"n": 2}]}) == "1,2,"

    def test_empty_list_skipped(self):
        assert render_string("a{{#xs}}X{{/xs}}b", {"xs": []}) == "ab"

    def test_empty_string_is_falsy(self):
        assert render_string("{{#s}}X{{/s}}{{^s}}Y{{/s}}", {"s": ""}) == "Y"

    def test_non_empty_string_is_truthy(self):
        assert render_string("{{#s}}X{{/s}}", {"s": "yes"}) == "X"

    def test_nested_context_scope(self):
        source = "{{#box}}{{label}}{{/box}}"
        assert render_string(source, {"box": {"label": "L"}}) == "L"

    def test_scope_falls_back_to_outer(self):
        source = "{{#box}}{{outer}}{{/box}}"
        assert render_string(source, {"box": {"x": 1}, "outer": "O"}) == "O"

    def test_dotted_path(self):
        assert render_string("{{a.b.c}}", {"a": {"b": {"c": "deep"}}}) == "deep"

    def test_dotted_path_miss_renders_empty(self):
        assert render_string("[{{a.zz}}]", {"a": {"b": 1}}) == "[]"

    def test_inverted_section(self):
        source = "{{^gone}}shown{{/gone}}{{^here}}hidden{{/here}}"
        assert render_string(source, {"here": True}) == "shown"

    def test_render_is_pure(self):
        ast = parse_template("{{#s}}{{v}}{{/s}}")
        ctx = {"s": True, "v": "x"}
        assert render(ast, ctx) == render(ast, ctx)
        assert ctx == {"s": True, "v": "x"}


class TestRenderFile:
    def test_gated_lines_leave_no_residue(self, tmp_path):
        path = tmp_path / "t.sol.tpl"
        path.write_text(
            "before\n/* #X */\ninner\n/* /X */\nafter\n", encoding="utf-8"
        )
        assert render_file(path, SOLIDITY_DELIMITERS, {"X": False}) == "before\nafter\n"
        assert render_file(path, SOLIDITY_DELIMITERS, {"X": True}) == "before\ninner\nafter\n"

    def test_single_gated_line_renders_empty(self, tmp_path):
        path = tmp_path / "t.sol.tpl"
        path.write_text("/* #X */ content /* /X */\n", encoding="utf-8")
        assert render_file(path, SOLIDITY_DELIMITERS, {"X": False}) == "\n"

    def test_pure_text_identity(self, tmp_path):
        text = "plain text\n  with indentation\n\nand blank lines\n"
        path = tmp_path / "t.tpl"
        path.write_text(text, encoding="utf-8")
        assert render_file(path, PLAIN_DELIMITERS, {}) == text

    def test_standalone_variable_lines_are_kept(self, tmp_path):
        path = tmp_path / "t.tpl"
        path.write_text("a\n  {{v}}\nb\n", encoding="utf-8")
        assert render_file(path, PLAIN_DELIMITERS, {"v": "V"}) == "a\n  V\nb\n"

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(OSError):
            render_file(tmp_path / "absent.tpl", PLAIN_DELIMITERS, {})


KEYS = ["alpha", "beta", "gamma", "delta"]


class TestProperties:
    @given(st.integers(0, 10**9))
    @settings(max_examples=100)
    def test_subtractive_soundness(self, seed):
        rng = random.Random(seed)
        nodes = random_template_nodes(rng, KEYS)
        source = nodes_to_source(nodes, PLAIN_DELIMITERS)
        ast = parse_template(source, PLAIN_DELIMITERS)
        ctx = random_context(rng, KEYS)
        key = rng.choice(KEYS)
        ctx[key] = False
        pruned = ast_of(delete_sections(ast.nodes, key))
        assert render(ast, ctx) == render(pruned, ctx)

    @given(st.integers(0, 10**9))
    @settings(max_examples=100)
    def test_delimiter_independence(self, seed):
        rng = random.Random(seed)
        nodes = random_template_nodes(rng, KEYS)
        ctx = random_context(rng, KEYS)
        plain = parse_template(nodes_to_source(nodes, PLAIN_DELIMITERS), PLAIN_DELIMITERS)
        wrapped = parse_template(
            nodes_to_source(nodes, SOLIDITY_DELIMITERS), SOLIDITY_DELIMITERS
        )
        assert render(plain, ctx) == render(wrapped, ctx)

    @given(st.integers(0, 10**9))
    @settings(max_examples=100)
    def test_round_trip_parse(self, seed):
        rng = random.Random(seed)
        nodes = random_template_nodes(rng, KEYS)
        source = nodes_to_source(nodes, PLAIN_DELIMITERS)
        reparsed = parse_template(source, PLAIN_DELIMITERS)
        assert nodes_to_source(reparsed.nodes, PLAIN_DELIMITERS) == source
