#include "studymap/export.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <sstream>

namespace studymap {

UnitFrame UnitFrame::fit(std::span<const Point2> points) {
    UnitFrame frame;
    if (points.empty()) return frame;
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
    double lo_y = lo_x, hi_y = -lo_x;
    for (auto p : points) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    frame.center = {(lo_x + hi_x) / 2, (lo_y + hi_y) / 2};
    const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
    frame.inverse_extent = extent > 0 ? 1.0 / extent : 0.0;
    return frame;
}

Point2 UnitFrame::apply(Point2 p) const {
    return {0.5 + (p.x - center.x) * inverse_extent, 0.5 + (p.y - center.y) * inverse_extent};
}

std::string_view palette_color(std::size_t index) {
    static constexpr std::array<std::string_view, kPaletteSize> colors{
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[index % colors.size()];
}

std::string_view status_color(Status status) {
    switch (status) {
        case Status::included: return "#1a9850";
        case Status::excluded: return "#d73027";
        case Status::undecided: break;
    }
    return "#bdbdbd";
}

namespace {

Json xy(Point2 p) { return Json::array({p.x, p.y}); }

std::string_view kind_name(NodeKind kind) { return kind == NodeKind::study ? "study" : "reference"; }

}  // namespace

Json map_json(const DocumentMapLayout& layout) {
    const auto frame = UnitFrame::fit(layout.positions);
    Json out = Json::array();
    for (std::size_t i = 0; i < layout.ids.size(); ++i) {
        const auto p = frame.apply(layout.positions[i]);
        out.push_back({{"id", layout.ids[i]}, {"x", p.x}, {"y", p.y}, {"is_control", bool(layout.is_control[i])}});
    }
    return out;
}

Json bundles_json(const BundleLayout& layout) {
    std::vector<Point2> anchors;
    for (const auto& n : layout.nodes) anchors.push_back(n.position);
    const auto frame = UnitFrame::fit(anchors);

    Json nodes = Json::array();
    for (const auto& n : layout.nodes) {
        const auto p = frame.apply(n.position);
        nodes.push_back({{"id", n.id}, {"x", p.x}, {"y", p.y}, {"cited_count", n.cited_count}});
    }
    Json edges = Json::array();
    for (const auto& e : layout.edges) {
        Json line = Json::array();
        for (auto p : e.polyline) line.push_back(xy(frame.apply(p)));
        edges.push_back({{"citing", e.citing}, {"cited", e.cited}, {"polyline", std::move(line)}});
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

Json network_json(const CitationGraph& graph, const NetworkLayout& layout) {
    const auto frame = UnitFrame::fit(layout.positions);
    Json nodes = Json::array();
    for (std::size_t i = 0; i < layout.ids.size(); ++i) {
        const auto p = frame.apply(layout.positions[i]);
        nodes.push_back({{"id", layout.ids[i]}, {"kind", kind_name(layout.kinds[i])}, {"x", p.x}, {"y", p.y}});
    }
    Json edges = Json::array();
    for (const auto& e : graph.cite_edges) {
        edges.push_back({{"a", graph.node_id(e.study)}, {"b", graph.node_id(e.target)}, {"kind", "cite"}, {"weight", e.weight}});
    }
    for (const auto& e : graph.shared_edges) {
        edges.push_back({{"a", graph.node_id(e.a)}, {"b", graph.node_id(e.b)}, {"kind", "shared"}, {"weight", e.weight}});
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"isolated", layout.isolated}};
}

Json matrix_json(const TermDocumentMatrix& matrix) {
    Json docs = Json::array();
    for (std::size_t d = 0; d < matrix.documents(); ++d) {
        Json entries = Json::array();
        for (auto [index, weight] : matrix.vectors()[d].entries) entries.push_back(Json::array({index, weight}));
        docs.push_back({{"id", matrix.study_ids()[d]}, {"entries", std::move(entries)}});
    }
    return {{"vocabulary", matrix.vocabulary()}, {"documents", std::move(docs)}};
}

Json clusters_json(const ClusterModel& model, std::span<const std::string> ids) {
    if (ids.size() != model.assignment.size()) throw InvalidArgument("clusters_json: one id per study is required");
    Json assignment = Json::object();
    for (std::size_t i = 0; i < ids.size(); ++i) assignment[ids[i]] = model.assignment[i];
    Json labels = Json::object(), colors = Json::object();
    for (std::size_t c = 0; c < model.k; ++c) {
        labels[std::to_string(c)] = model.label(c);
        const std::size_t slot = c < model.palette_index.size() ? model.palette_index[c] : c;
        colors[std::to_string(c)] = palette_color(slot);
    }
    return {{"k", model.k}, {"assignment", std::move(assignment)}, {"labels", std::move(labels)}, {"colors", std::move(colors)}};
}

namespace {

Json hierarchy_node(const HierarchyTree& tree, std::size_t v) {
    const auto& node = tree.nodes()[v];
    Json out = {{"node", v}, {"depth", node.depth}, {"centroid", xy(node.centroid)}, {"size", node.members.size()}};
    if (node.is_leaf()) {
        Json studies = Json::array();
        for (auto s : node.members) studies.push_back(tree.ids()[s]);
        out["studies"] = std::move(studies);
    } else {
        Json children = Json::array();
        for (auto c : node.children) children.push_back(hierarchy_node(tree, c));
        out["children"] = std::move(children);
    }
    return out;
}

std::string_view cluster_color(const ClusterModel& model, std::size_t c) {
    return palette_color(c < model.palette_index.size() ? model.palette_index[c] : c);
}

}  // namespace

Json hierarchy_json(const HierarchyTree& tree) {
    if (tree.nodes().empty()) return Json::object();
    return hierarchy_node(tree, tree.root());
}

Json cluster_overlay(const ClusterModel& model, const DocumentMapLayout& map) {
    if (map.ids.size() != model.assignment.size()) throw InvalidArgument("cluster_overlay: model does not match the map");
    const auto frame = UnitFrame::fit(map.positions);
    Json points = Json::array();
    for (std::size_t i = 0; i < map.ids.size(); ++i) {
        const auto c = model.assignment[i];
        points.push_back({{"id", map.ids[i]}, {"cluster", c}, {"color", cluster_color(model, c)}});
    }
    Json topics = Json::array();
    for (std::size_t c = 0; c < model.k; ++c) {
        const auto members = model.members(c);
        Point2 sum;
        for (auto m : members) sum = sum + frame.apply(map.positions[m]);
        const auto at = members.empty() ? Point2{0.5, 0.5} : (1.0 / static_cast<double>(members.size())) * sum;
        topics.push_back({{"cluster", c}, {"label", model.label(c)}, {"color", cluster_color(model, c)}, {"x", at.x}, {"y", at.y}});
    }
    return {{"type", "clusters"}, {"points", std::move(points)}, {"topics", std::move(topics)}};
}

Json expression_overlay(const ExpressionHeat& heat, std::span<const std::string> ids) {
    if (ids.size() != heat.counts.size()) throw InvalidArgument("expression_overlay: one id per study is required");
    Json points = Json::array();
    std::size_t max_count = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        max_count = std::max(max_count, heat.counts[i]);
        points.push_back({{"id", ids[i]}, {"count", heat.counts[i]}, {"shade", heat.shade[i]}});
    }
    return {{"type", "expression"}, {"expression", heat.expression}, {"max_count", max_count}, {"points", std::move(points)}};
}

Json knn_overlay(const TermDocumentMatrix& matrix, std::size_t k) {
    Json edges = Json::array();
    if (matrix.documents() >= 2) {
        for (std::size_t d = 0; d < matrix.documents(); ++d) {
            for (const auto& nb : knn(matrix, d, k)) {
                edges.push_back({{"source", matrix.study_ids()[d]}, {"target", nb.id}, {"similarity", nb.similarity}});
            }
        }
    }
    return {{"type", "knn"}, {"k", k}, {"edges", std::move(edges)}};
}

Json status_overlay(const ReviewSession& session) {
    Json points = Json::array();
    for (std::size_t i = 0; i < session.size(); ++i) {
        const auto s = session.decisions()[i].status;
        points.push_back({{"id", session.ids()[i]}, {"status", to_string(s)}, {"color", status_color(s)}});
    }
    return {{"type", "status"}, {"points", std::move(points)}};
}

Json diagnostics_json(const Diagnostics& diagnostics) {
    Json out = Json::array();
    for (const auto& d : diagnostics) out.push_back({{"entry_id", d.entry_id}, {"offset", d.offset}, {"message", d.message}});
    return out;
}

// --- SVG ----------------------------------------------------------------------

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

class Canvas {
public:
    Canvas(const SvgStyle& style, UnitFrame frame) : style_(style), frame_(frame) {
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(style.size) << "\" height=\""
             << num(style.size) << "\" viewBox=\"0 0 " << num(style.size) << ' ' << num(style.size) << "\">\n";
        out_ << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    }

    // unit-square y grows upward, SVG y grows downward
    Point2 px(Point2 p) const {
        const auto u = frame_.apply(p);
        const double span = style_.size - 2 * style_.margin;
        return {style_.margin + u.x * span, style_.margin + (1.0 - u.y) * span};
    }

    std::ostringstream& out() { return out_; }

    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

private:
    SvgStyle style_;
    UnitFrame frame_;
    std::ostringstream out_;
};

void circle(std::ostream& os, Point2 c, double r, std::string_view fill, std::string_view id,
            std::string_view extra = "") {
    os << "<circle cx=\"" << num(c.x) << "\" cy=\"" << num(c.y) << "\" r=\"" << num(r) << "\" fill=\"" << fill << '"'
       << extra << "><title>" << escape_xml(id) << "</title></circle>\n";
}

void line(std::ostream& os, Point2 a, Point2 b, std::string_view stroke, double width, double opacity) {
    os << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y)
       << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\" stroke-opacity=\"" << num(opacity)
       << "\"/>\n";
}

}  // namespace

std::string map_svg(const DocumentMapLayout& layout, const ClusterModel* clusters, const SvgStyle& style) {
    if (clusters && clusters->assignment.size() != layout.ids.size()) {
        throw InvalidArgument("map_svg: cluster model does not match the map");
    }
    Canvas canvas(style, UnitFrame::fit(layout.positions));
    auto& os = canvas.out();
    for (std::size_t i = 0; i < layout.ids.size(); ++i) {
        const auto fill = clusters ? cluster_color(*clusters, clusters->assignment[i]) : std::string_view("#4c4c4c");
        circle(os, canvas.px(layout.positions[i]), layout.is_control[i] ? 5.0 : 4.0, fill, layout.ids[i],
               layout.is_control[i] ? " stroke=\"#000000\" stroke-width=\"1\"" : "");
    }
    if (clusters) {
        for (std::size_t c = 0; c < clusters->k; ++c) {
            const auto members = clusters->members(c);
            if (members.empty()) continue;
            Point2 sum;
            for (auto m : members) sum = sum + canvas.px(layout.positions[m]);
            const auto at = (1.0 / static_cast<double>(members.size())) * sum;
            os << "<text x=\"" << num(at.x) << "\" y=\"" << num(at.y - 8) << "\" font-family=\"sans-serif\" "
               << "font-size=\"12\" text-anchor=\"middle\" fill=\"" << cluster_color(*clusters, c) << "\" stroke=\"#ffffff\" "
               << "stroke-width=\"3\" paint-order=\"stroke\">" << escape_xml(clusters->label(c)) << "</text>\n";
        }
    }
    return canvas.finish();
}

std::string bundles_svg(const BundleLayout& layout, const SvgStyle& style) {
    std::vector<Point2> anchors;
    for (const auto& n : layout.nodes) anchors.push_back(n.position);
    Canvas canvas(style, UnitFrame::fit(anchors));
    auto& os = canvas.out();
    os << "<defs>\n";
    for (std::size_t e = 0; e < layout.edges.size(); ++e) {
        const auto a = canvas.px(layout.edges[e].polyline.front());
        const auto b = canvas.px(layout.edges[e].polyline.back());
        os << "<linearGradient id=\"edge" << e << "\" gradientUnits=\"userSpaceOnUse\" x1=\"" << num(a.x) << "\" y1=\""
           << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y) << "\"><stop offset=\"0\" stop-color=\""
           << kCitingColor << "\"/><stop offset=\"1\" stop-color=\"" << kCitedColor << "\"/></linearGradient>\n";
    }
    os << "</defs>\n";
    for (std::size_t e = 0; e < layout.edges.size(); ++e) {
        os << "<polyline fill=\"none\" stroke=\"url(#edge" << e << ")\" stroke-width=\"1.5\" stroke-opacity=\"0.8\" points=\"";
        bool first = true;
        for (auto p : layout.edges[e].polyline) {
            const auto q = canvas.px(p);
            os << (first ? "" : " ") << num(q.x) << ',' << num(q.y);
            first = false;
        }
        os << "\"/>\n";
    }
    for (const auto& n : layout.nodes) {
        circle(os, canvas.px(n.position), 3.0 + std::min<double>(static_cast<double>(n.cited_count), 6.0), "#08306b",
               n.id);
    }
    return canvas.finish();
}

std::string network_svg(const CitationGraph& graph, const NetworkLayout& layout, const SvgStyle& style) {
    if (layout.positions.size() != graph.node_count()) throw InvalidArgument("network_svg: layout does not match graph");
    Canvas canvas(style, UnitFrame::fit(layout.positions));
    auto& os = canvas.out();
    for (const auto& e : graph.cite_edges) {
        line(os, canvas.px(layout.positions[e.study]), canvas.px(layout.positions[e.target]), "#9e9e9e", 1.0, 0.6);
    }
    for (const auto& e : graph.shared_edges) {
        line(os, canvas.px(layout.positions[e.a]), canvas.px(layout.positions[e.b]), "#08306b",
             std::min<double>(static_cast<double>(e.weight), 4.0), 0.8);
    }
    std::vector<bool> isolated(layout.ids.size(), false);
    for (std::size_t i = 0, j = 0; i < graph.study_nodes.size() && j < layout.isolated.size(); ++i) {
        if (graph.study_nodes[i] == layout.isolated[j]) isolated[i] = true, ++j;
    }
    for (std::size_t i = graph.study_nodes.size(); i < layout.ids.size(); ++i) {
        circle(os, canvas.px(layout.positions[i]), 2.0, "#bdbdbd", layout.ids[i]);
    }
    for (std::size_t i = 0; i < graph.study_nodes.size(); ++i) {
        circle(os, canvas.px(layout.positions[i]), 5.0, isolated[i] ? "#ffffff" : "#2171b5", layout.ids[i],
               isolated[i] ? " stroke=\"#d73027\" stroke-width=\"2\"" : "");
    }
    return canvas.finish();
}

}  // namespace studymap
