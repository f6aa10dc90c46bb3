#include "pathlog/xml.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>

namespace pathlog {

namespace {

struct XmlNode {
    bool is_text = false;
    std::string tag;   // elements
    std::string text;  // text nodes
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlNode> children;
};

class XmlParser {
public:
    explicit XmlParser(const std::string& text) : text_(text) {}

    XmlNode parse_document() {
        skip_misc();
        if (eof() || peek() != '<') fail("expected root element");
        XmlNode root = parse_element();
        skip_misc();
        if (!eof()) fail("content after root element");
        return root;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("xml offset " + std::to_string(pos_) + ": " + msg);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    bool starts_with(const char* s) const { return text_.compare(pos_, std::strlen(s), s) == 0; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    // Prolog, comments, doctype, processing instructions.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<?")) {
                consume_until("?>");
            } else if (starts_with("<!--")) {
                consume_until("-->");
            } else if (starts_with("<!")) {
                consume_until(">");
            } else {
                return;
            }
        }
    }

    void consume_until(const char* end) {
        auto at = text_.find(end, pos_);
        if (at == std::string::npos) fail(std::string("unterminated '") + end + "' construct");
        pos_ = at + std::strlen(end);
    }

    std::string parse_name() {
        std::size_t begin = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-' || peek() == '.' || peek() == ':'))
            ++pos_;
        if (pos_ == begin) fail("expected name");
        return text_.substr(begin, pos_ - begin);
    }

    std::string decode_entities(const std::string& raw) {
        std::string out;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            auto semi = raw.find(';', i);
            if (semi == std::string::npos) fail("unterminated entity reference");
            std::string ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "amp") out += '&';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (!ent.empty() && ent[0] == '#')
                out += static_cast<char>(std::stoi(ent.substr(1)));
            else fail("unknown entity '&" + ent + ";'");
            i = semi;
        }
        return out;
    }

    XmlNode parse_element() {
        ++pos_;  // '<'
        XmlNode node;
        node.tag = parse_name();
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (peek() == '/') {
                ++pos_;
                if (eof() || peek() != '>') fail("expected '/>'");
                ++pos_;
                return node;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            std::string attr = parse_name();
            skip_ws();
            if (eof() || peek() != '=') fail("expected '=' after attribute name");
            ++pos_;
            skip_ws();
            if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted value");
            char quote = peek();
            ++pos_;
            auto end = text_.find(quote, pos_);
            if (end == std::string::npos) fail("unterminated attribute value");
            node.attrs.emplace_back(attr, decode_entities(text_.substr(pos_, end - pos_)));
            pos_ = end + 1;
        }

        // Content until the matching end tag.
        for (;;) {
            if (eof()) fail("missing </" + node.tag + ">");
            if (peek() == '<') {
                if (starts_with("</")) {
                    pos_ += 2;
                    std::string closing = parse_name();
                    if (closing != node.tag)
                        fail("mismatched </" + closing + ">, expected </" + node.tag + ">");
                    skip_ws();
                    if (eof() || peek() != '>') fail("expected '>'");
                    ++pos_;
                    return node;
                }
                if (starts_with("<!--")) {
                    consume_until("-->");
                    continue;
                }
                if (starts_with("<?")) {
                    consume_until("?>");
                    continue;
                }
                node.children.push_back(parse_element());
                continue;
            }
            std::size_t begin = pos_;
            while (!eof() && peek() != '<') ++pos_;
            std::string raw = text_.substr(begin, pos_ - begin);
            bool only_ws = std::all_of(raw.begin(), raw.end(), [](unsigned char c) {
                return std::isspace(c);
            });
            if (!only_ws) {
                XmlNode t;
                t.is_text = true;
                t.text = decode_entities(raw);
                node.children.push_back(std::move(t));
            }
        }
    }
};

std::string escape_label_text(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '%': out += "%25"; break;
        case ' ': out += "%20"; break;
        case '\t': out += "%09"; break;
        case '\n': out += "%0A"; break;
        case '\r': out += "%0D"; break;
        default: out += c;
        }
    }
    return out;
}

class Encoder {
public:
    XmlGraphEncoding encode(const XmlNode& root) {
        g_.nodes.insert("doc");
        g_.node_labels["document"].insert("doc");
        NodeId root_id = encode_element(root);
        g_.edges["first"].insert({"doc", root_id});
        XmlGraphEncoding out;
        out.graph = std::move(g_);
        out.document_node = "doc";
        return out;
    }

private:
    LabeledGraph g_;
    int next_element_ = 0;
    int next_string_ = 0;
    std::map<std::string, NodeId> tag_nodes_;

    NodeId tag_node(const std::string& tag) {
        auto it = tag_nodes_.find(tag);
        if (it != tag_nodes_.end()) return it->second;
        NodeId id = "name:" + tag;
        g_.nodes.insert(id);
        g_.node_labels[escape_label_text(tag)].insert(id);
        tag_nodes_.emplace(tag, id);
        return id;
    }

    NodeId string_node(const std::string& text) {
        NodeId id = "s" + std::to_string(next_string_++);
        g_.nodes.insert(id);
        g_.node_labels["string"].insert(id);
        if (!text.empty()) g_.node_labels[escape_label_text(text)].insert(id);
        return id;
    }

    NodeId encode_element(const XmlNode& el) {
        NodeId id = "e" + std::to_string(next_element_++);
        g_.nodes.insert(id);
        g_.node_labels["element"].insert(id);
        g_.edges["name"].insert({id, tag_node(el.tag)});
        for (const auto& [attr, value] : el.attrs)
            g_.edges[attr].insert({id, string_node(value)});

        NodeId prev;
        for (const XmlNode& child : el.children) {
            NodeId cid = child.is_text ? string_node(child.text) : encode_element(child);
            if (prev.empty())
                g_.edges["first"].insert({id, cid});
            else
                g_.edges["next"].insert({prev, cid});
            prev = cid;
        }
        return id;
    }
};

} // namespace

XmlGraphEncoding xml_to_graph(const std::string& xml) {
    XmlNode root = XmlParser(xml).parse_document();
    return Encoder().encode(root);
}

XPathExpr xpath_parse(const std::string& text) {
    XPathExpr expr;
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("xpath offset " + std::to_string(pos) + ": " + msg);
    };
    if (text.empty()) fail("empty expression");
    if (text[0] != '/') fail("expression must be absolute");

    while (pos < text.size()) {
        XPathStep step;
        if (text[pos] != '/') fail("expected '/'");
        ++pos;
        if (pos < text.size() && text[pos] == '/') {
            step.axis = XPathStep::Axis::Descendant;
            ++pos;
        }
        if (pos >= text.size()) fail("expected a name test");
        if (text[pos] == '@' || text[pos] == '.')
            throw UnsupportedError("xpath offset " + std::to_string(pos) +
                                   ": only child and descendant steps are supported");
        if (text[pos] == '*') {
            step.wildcard = true;
            ++pos;
        } else {
            std::size_t begin = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                    text[pos] == '-' || text[pos] == '.'))
                ++pos;
            if (pos == begin) fail("expected a name test");
            step.name = text.substr(begin, pos - begin);
        }
        if (pos < text.size() && text[pos] != '/')
            throw UnsupportedError(
                "xpath offset " + std::to_string(pos) +
                ": only child and descendant steps with name tests are supported");
        expr.steps.push_back(std::move(step));
    }
    return expr;
}

PathPtr xpath_to_nrpq(const XPathExpr& e) {
    PathPtr out = filter_step(node_label("document"));
    for (const XPathStep& step : e.steps) {
        PathPtr move = concat(edge("first"), star(edge("next")));
        if (step.axis == XPathStep::Axis::Descendant) move = plus(move);
        out = concat(out, concat(move, filter_step(node_label("element"))));
        if (!step.wildcard)
            out = concat(out, filter_step(has_path(
                                  concat(edge("name"), filter_step(node_label(step.name))))));
    }
    return desugar(out, {});
}

std::pair<std::vector<IndexDef>, PathPtr> indexed_descendant_query(const std::string& outer,
                                                                   const std::string& inner) {
    auto named_element = [](const std::string& tag) {
        return f_and(node_label("element"),
                     has_path(concat(edge("name"), filter_step(node_label(tag)))));
    };
    std::set<Label> structural{"first", "next"};
    std::vector<IndexDef> defs{make_top_index(outer, structural, named_element(outer)),
                               make_top_index(inner, structural, named_element(inner))};
    PathPtr query = concat(concat(filter_step(node_label("document")), plus(edge("top_" + outer))),
                           plus(edge("top_" + inner)));
    return {std::move(defs), std::move(query)};
}

std::string gen_synthetic_doc(int depth, int fanout, double keyword_density,
                              std::uint64_t seed) {
    if (depth < 1 || fanout < 1)
        throw ValidationError("synthetic document needs depth >= 1 and fanout >= 1");
    if (keyword_density < 0.0 || keyword_density > 1.0)
        throw ValidationError("keyword density must be within [0, 1]");

    std::mt19937_64 rng(seed);
    auto keep_keyword = [&] {
        // Explicit threshold keeps output identical across standard libraries.
        return (rng() % 1000000) < static_cast<std::uint64_t>(keyword_density * 1000000.0);
    };

    std::ostringstream body;
    int elements = 1;  // <site>
    std::function<void(int, int)> listitems = [&](int level, int indent) {
        std::string pad(indent * 2, ' ');
        for (int i = 0; i < fanout; ++i) {
            ++elements;
            if (level < depth) {
                body << pad << "<listitem>\n";
                listitems(level + 1, indent + 1);
                body << pad << "</listitem>\n";
            } else if (keep_keyword()) {
                ++elements;
                body << pad << "<listitem><keyword>kw</keyword></listitem>\n";
            } else {
                body << pad << "<listitem/>\n";
            }
        }
    };

    body << "<site>\n";
    for (int r = 0; r < fanout; ++r) {
        ++elements;
        body << "  <regions>\n";
        listitems(1, 2);
        body << "  </regions>\n";
    }
    body << "</site>\n";

    std::ostringstream out;
    out << "<!-- elements: " << elements << " -->\n" << body.str();
    return out.str();
}

} // namespace pathlog
