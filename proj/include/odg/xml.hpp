#ifndef ODG_XML_HPP
#define ODG_XML_HPP

#include <functional>
#include <span>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Thin read-only DOM over an in-situ XML parser. Only what the harvesters
// need: element lookup by name, attributes, and character data.
namespace odg::xml {

class Element {
public:
  Element() = default;

  explicit operator bool() const noexcept { return node_ != nullptr; }
  std::string_view name() const;
  std::optional<std::string_view> attribute(std::string_view attr) const;

  /// First direct child element named `child_name`; empty Element if none.
  Element child(std::string_view child_name) const;
  /// Direct child elements, optionally filtered by name.
  std::vector<Element> children(std::string_view child_name = {}) const;
  /// Follows a slash-separated chain of child names, e.g. "Article/Abstract".
  Element path(std::string_view slash_path) const;
  /// Outermost descendant elements named `target`, in document order. Matches
  /// are not searched for nested matches, and subtrees rooted at an element
  /// whose name is in `skip` are not entered.
  std::vector<Element> descendants(std::string_view target,
                                   std::span<const std::string_view> skip = {}) const;

  /// Concatenated character data of this element and all descendants.
  std::string text() const;
  /// Like text(), but drops the contents of descendants named in `skip`.
  std::string text_excluding(std::span<const std::string_view> skip) const;

private:
  friend class Document;
  explicit Element(const void* node) : node_(node) {}
  const void* node_ = nullptr;
};

class Document {
public:
  /// Parses a complete document; throws ParseError if it is not well formed.
  explicit Document(std::string text);
  ~Document();
  Document(Document&&) noexcept;
  Document& operator=(Document&&) noexcept;

  /// The document element.
  Element root() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Streams the direct children of the document element that are named
/// `child_name`, passing each child's raw markup to `fn`. Only the tag
/// structure is scanned, so large files can be split before full parsing.
/// Throws ParseError on unbalanced markup.
void for_each_top_level_element(std::string_view document, std::string_view child_name,
                                const std::function<void(std::string_view)>& fn);

}  // namespace odg::xml

#endif
