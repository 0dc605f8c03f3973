#include "tabletop/printout/pdf_writer.hpp"

#include <cstdio>

#include <zlib.h>

#include "tabletop/error.hpp"

namespace tabletop::printout {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

std::string deflate(const std::vector<std::uint8_t>& data) {
  uLongf size = compressBound(static_cast<uLong>(data.size()));
  std::string out(size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(out.data()), &size, data.data(),
                static_cast<uLong>(data.size()), Z_BEST_COMPRESSION) != Z_OK) {
    throw Error(ErrorCode::IoError, "zlib compression failed");
  }
  out.resize(size);
  return out;
}

std::string escape_text(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '(' || ch == ')' || ch == '\\') out += '\\';
    out += (ch >= 32 && ch < 127) ? ch : '?';
  }
  return out;
}

class Builder {
 public:
  int reserve() {
    offsets_.push_back(0);
    return static_cast<int>(offsets_.size());
  }
  void object(int id, const std::string& body) {
    offsets_[id - 1] = out_.size();
    out_ += std::to_string(id) + " 0 obj\n" + body + "\nendobj\n";
  }
  void stream(int id, const std::string& dict, const std::string& data) {
    object(id, "<< " + dict + " /Length " + std::to_string(data.size()) + " >>\nstream\n" +
                   data + "\nendstream");
  }
  std::string finish(int root) {
    const std::size_t xref = out_.size();
    out_ += "xref\n0 " + std::to_string(offsets_.size() + 1) + "\n0000000000 65535 f \n";
    for (std::size_t off : offsets_) {
      char line[24];
      std::snprintf(line, sizeof line, "%010zu 00000 n \n", off);
      out_ += line;
    }
    out_ += "trailer\n<< /Size " + std::to_string(offsets_.size() + 1) + " /Root " +
            std::to_string(root) + " 0 R >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
    return std::move(out_);
  }

 private:
  std::string out_ = "%PDF-1.4\n%\xE2\xE3\xCF\xD3\n";
  std::vector<std::size_t> offsets_;
};

}  // namespace

std::string write_pdf(const std::vector<PdfPage>& pages) {
  if (pages.empty()) throw Error(ErrorCode::InvalidArgument, "a PDF needs at least one page");
  Builder pdf;
  const int catalog = pdf.reserve();
  const int tree = pdf.reserve();
  const int font = pdf.reserve();
  std::vector<int> page_ids;
  std::string kids;
  for (const auto& page : pages) {
    if (page.image.size() != static_cast<std::size_t>(page.image_width) * page.image_height) {
      throw Error(ErrorCode::InvalidArgument, "page image size does not match its pixels");
    }
    const int id = pdf.reserve();
    const int content = pdf.reserve();
    const int image = pdf.reserve();
    kids += std::to_string(id) + " 0 R ";

    std::string ops = "q " + num(page.image_w_pt) + " 0 0 " + num(page.image_h_pt) + " " +
                      num(page.image_x_pt) + " " + num(page.image_y_pt) + " cm /Im0 Do Q\n";
    if (!page.lines.empty()) {
      ops += "q 0 G 0.25 w\n";
      for (const auto& l : page.lines) {
        ops += num(l.x0) + " " + num(l.y0) + " m " + num(l.x1) + " " + num(l.y1) + " l S\n";
      }
      ops += "Q\n";
    }
    for (const auto& t : page.texts) {
      ops += "BT /F1 " + num(t.size) + " Tf " + num(t.x) + " " + num(t.y) + " Td (" +
             escape_text(t.text) + ") Tj ET\n";
    }
    pdf.object(id, "<< /Type /Page /Parent " + std::to_string(tree) + " 0 R /MediaBox [0 0 " +
                       num(page.width_pt) + " " + num(page.height_pt) +
                       "] /Resources << /XObject << /Im0 " + std::to_string(image) +
                       " 0 R >> /Font << /F1 " + std::to_string(font) +
                       " 0 R >> >> /Contents " + std::to_string(content) + " 0 R >>");
    pdf.stream(content, "", ops);
    pdf.stream(image,
               "/Type /XObject /Subtype /Image /Width " + std::to_string(page.image_width) +
                   " /Height " + std::to_string(page.image_height) +
                   " /ColorSpace /DeviceGray /BitsPerComponent 8 /Filter /FlateDecode",
               deflate(page.image));
  }
  pdf.object(catalog, "<< /Type /Catalog /Pages " + std::to_string(tree) + " 0 R >>");
  pdf.object(tree, "<< /Type /Pages /Kids [" + kids + "] /Count " +
                       std::to_string(pages.size()) + " >>");
  pdf.object(font, "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");
  return pdf.finish(catalog);
}

}  // namespace tabletop::printout
