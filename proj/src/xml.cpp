#include "odg/xml.hpp"

#include <boost/property_tree/detail/rapidxml.hpp>

#include <algorithm>

#include "odg/error.hpp"

namespace odg::xml {

namespace rx = boost::property_tree::detail::rapidxml;
using Node = rx::xml_node<char>;

namespace {

const Node* as_node(const void* p) { return static_cast<const Node*>(p); }

std::string_view node_name(const Node* n) { return {n->name(), n->name_size()}; }

bool in_list(std::string_view name, std::span<const std::string_view> list) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

void collect_text(const Node* n, std::span<const std::string_view> skip, std::string& out) {
  for (const Node* c = n->first_node(); c; c = c->next_sibling()) {
    switch (c->type()) {
      case rx::node_data:
      case rx::node_cdata:
        out.append(c->value(), c->value_size());
        break;
      case rx::node_element:
        if (!in_list(node_name(c), skip)) collect_text(c, skip, out);
        break;
      default:
        break;
    }
  }
}

void collect_descendants(const Node* n, std::string_view target,
                         std::span<const std::string_view> skip,
                         std::vector<const Node*>& out) {
  for (const Node* c = n->first_node(); c; c = c->next_sibling()) {
    if (c->type() != rx::node_element) continue;
    const auto name = node_name(c);
    if (in_list(name, skip)) continue;
    if (name == target) {
      out.push_back(c);
      continue;
    }
    collect_descendants(c, target, skip, out);
  }
}

}  // namespace

std::string_view Element::name() const { return node_ ? node_name(as_node(node_)) : std::string_view{}; }

std::optional<std::string_view> Element::attribute(std::string_view attr) const {
  if (!node_) return std::nullopt;
  for (auto* a = as_node(node_)->first_attribute(); a; a = a->next_attribute()) {
    if (std::string_view(a->name(), a->name_size()) == attr) return std::string_view(a->value(), a->value_size());
  }
  return std::nullopt;
}

Element Element::child(std::string_view child_name) const {
  if (!node_) return {};
  for (const Node* c = as_node(node_)->first_node(); c; c = c->next_sibling()) {
    if (c->type() == rx::node_element && node_name(c) == child_name) return Element(c);
  }
  return {};
}

std::vector<Element> Element::children(std::string_view child_name) const {
  std::vector<Element> out;
  if (!node_) return out;
  for (const Node* c = as_node(node_)->first_node(); c; c = c->next_sibling()) {
    if (c->type() != rx::node_element) continue;
    if (child_name.empty() || node_name(c) == child_name) out.push_back(Element(c));
  }
  return out;
}

Element Element::path(std::string_view slash_path) const {
  Element cur = *this;
  while (cur && !slash_path.empty()) {
    const auto pos = slash_path.find('/');
    cur = cur.child(slash_path.substr(0, pos));
    if (pos == std::string_view::npos) break;
    slash_path.remove_prefix(pos + 1);
  }
  return cur;
}

std::vector<Element> Element::descendants(std::string_view target,
                                          std::span<const std::string_view> skip) const {
  std::vector<Element> out;
  if (!node_) return out;
  std::vector<const Node*> nodes;
  collect_descendants(as_node(node_), target, skip, nodes);
  out.reserve(nodes.size());
  for (auto* n : nodes) out.push_back(Element(n));
  return out;
}

std::string Element::text() const { return text_excluding({}); }

std::string Element::text_excluding(std::span<const std::string_view> skip) const {
  std::string out;
  if (node_) collect_text(as_node(node_), skip, out);
  return out;
}

struct Document::Impl {
  std::string buffer;
  rx::xml_document<char> doc;
};

Document::Document(std::string text) : impl_(std::make_unique<Impl>()) {
  impl_->buffer = std::move(text);
  try {
    impl_->doc.parse<rx::parse_validate_closing_tags>(impl_->buffer.data());
  } catch (const rx::parse_error& e) {
    throw ParseError(std::string("malformed XML: ") + e.what());
  }
  if (!root()) throw ParseError("malformed XML: no document element");
}

Document::~Document() = default;
Document::Document(Document&&) noexcept = default;
Document& Document::operator=(Document&&) noexcept = default;

Element Document::root() const {
  for (const Node* c = impl_->doc.first_node(); c; c = c->next_sibling()) {
    if (c->type() == rx::node_element) return Element(c);
  }
  return {};
}

namespace {

std::size_t find_or_throw(std::string_view doc, std::string_view token, std::size_t from, const char* what) {
  const auto pos = doc.find(token, from);
  if (pos == std::string_view::npos) throw ParseError(std::string("unterminated ") + what);
  return pos;
}

bool is_name_end(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '/' || c == '>'; }

}  // namespace

void for_each_top_level_element(std::string_view doc, std::string_view child_name,
                                const std::function<void(std::string_view)>& fn) {
  std::vector<std::string_view> open;
  std::size_t child_start = std::string_view::npos;
  bool seen_root = false;
  std::size_t i = 0;
  while (true) {
    i = doc.find('<', i);
    if (i == std::string_view::npos) break;
    const auto rest = doc.substr(i);
    if (rest.starts_with("<?")) {
      i = find_or_throw(doc, "?>", i + 2, "processing instruction") + 2;
    } else if (rest.starts_with("<!--")) {
      i = find_or_throw(doc, "-->", i + 4, "comment") + 3;
    } else if (rest.starts_with("<![CDATA[")) {
      i = find_or_throw(doc, "]]>", i + 9, "CDATA section") + 3;
    } else if (rest.starts_with("<!")) {
      // Declarations such as DOCTYPE, possibly with an internal subset.
      int brackets = 0;
      char quote = 0;
      std::size_t j = i + 2;
      for (; j < doc.size(); ++j) {
        const char c = doc[j];
        if (quote) {
          if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
          quote = c;
        } else if (c == '[') {
          ++brackets;
        } else if (c == ']') {
          --brackets;
        } else if (c == '>' && brackets == 0) {
          break;
        }
      }
      if (j >= doc.size()) throw ParseError("unterminated declaration");
      i = j + 1;
    } else if (rest.starts_with("</")) {
      std::size_t j = i + 2;
      while (j < doc.size() && !is_name_end(doc[j])) ++j;
      const auto name = doc.substr(i + 2, j - i - 2);
      const auto close = find_or_throw(doc, ">", j, "end tag");
      if (open.empty() || open.back() != name)
        throw ParseError("mismatched end tag </" + std::string(name) + ">");
      open.pop_back();
      if (open.size() == 1 && child_start != std::string_view::npos) {
        fn(doc.substr(child_start, close + 1 - child_start));
        child_start = std::string_view::npos;
      }
      i = close + 1;
    } else {
      std::size_t j = i + 1;
      while (j < doc.size() && !is_name_end(doc[j])) ++j;
      const auto name = doc.substr(i + 1, j - i - 1);
      if (name.empty()) throw ParseError("empty tag name");
      char quote = 0;
      for (; j < doc.size(); ++j) {
        const char c = doc[j];
        if (quote) {
          if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
          quote = c;
        } else if (c == '>') {
          break;
        }
      }
      if (j >= doc.size()) throw ParseError("unterminated start tag <" + std::string(name) + ">");
      const bool self_closing = doc[j - 1] == '/';
      if (open.empty()) {
        if (seen_root) throw ParseError("more than one document element");
        seen_root = true;
      }
      const bool is_target_child = open.size() == 1 && name == child_name;
      if (self_closing) {
        if (is_target_child) fn(doc.substr(i, j + 1 - i));
      } else {
        if (is_target_child) child_start = i;
        open.push_back(name);
      }
      i = j + 1;
    }
  }
  if (!open.empty()) throw ParseError("unclosed element <" + std::string(open.back()) + ">");
  if (!seen_root) throw ParseError("no document element");
}

}  // namespace odg::xml
