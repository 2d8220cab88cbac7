#include "cloudfolio/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "cloudfolio/error.hpp"
#include "text_util.hpp"

namespace cloudfolio {

namespace detail {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

std::string_view to_string(InterruptionBucket bucket) {
  switch (bucket) {
    case InterruptionBucket::kLt5: return "LT5";
    case InterruptionBucket::kB5To10: return "B5_10";
    case InterruptionBucket::kB10To15: return "B10_15";
    case InterruptionBucket::kB15To20: return "B15_20";
    case InterruptionBucket::kGt20: return "GT20";
  }
  return "?";
}

std::optional<InterruptionBucket> parse_bucket(std::string_view text) {
  std::string t;
  for (char c : detail::trim(text)) {
    if (c != ' ') t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (t == "LT5" || t == "<5%") return InterruptionBucket::kLt5;
  if (t == "B5_10" || t == "5-10%") return InterruptionBucket::kB5To10;
  if (t == "B10_15" || t == "10-15%") return InterruptionBucket::kB10To15;
  if (t == "B15_20" || t == "15-20%") return InterruptionBucket::kB15To20;
  if (t == "GT20" || t == ">20%") return InterruptionBucket::kGt20;
  return std::nullopt;
}

void CostModel::validate() const {
  if (penalty < Money()) throw Error(ErrorCode::kInvalidArgument, "penalty must be non-negative");
  if (hours_per_month <= 0) throw Error(ErrorCode::kInvalidArgument, "hours_per_month must be positive");
  for (std::size_t i = 0; i < kBucketCount; ++i) {
    if (!(bucket_rate[i] >= 0.0 && bucket_rate[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bucket rate for " + std::string(to_string(static_cast<InterruptionBucket>(i))) +
                      " must lie in [0, 1]");
    }
  }
}

Catalog::Catalog(std::vector<InstanceType> types, std::vector<PriceEntry> prices, CostModel defaults)
    : types_(std::move(types)), prices_(std::move(prices)), defaults_(defaults) {
  defaults_.validate();
  price_index_.resize(types_.size());
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const auto& t = types_[i];
    if (t.name.empty()) throw Error(ErrorCode::kSchemaViolation, "instance type with empty name");
    if (t.vcpu <= 0 || !(t.clock_mhz_per_vcpu > 0.0) || !(t.memory_gib > 0.0)) {
      throw Error(ErrorCode::kSchemaViolation, "instance type '" + t.name + "' needs positive vcpu, clock and memory");
    }
    if (!type_index_.emplace(t.name, i).second) {
      throw Error(ErrorCode::kDuplicateEntry, "instance type '" + t.name + "' declared twice");
    }
  }
  std::set<std::tuple<std::string, Marketspace, std::string>> seen;
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    const auto& p = prices_[i];
    const auto it = type_index_.find(p.instance_type);
    if (it == type_index_.end()) {
      throw Error(ErrorCode::kDanglingReference, "price references undeclared instance type '" + p.instance_type + "'");
    }
    const bool per_term = is_per_term(p.marketspace);
    if ((p.unit == PriceUnit::kPerTerm) != per_term) {
      throw Error(ErrorCode::kSchemaViolation, "unit of " + p.instance_type + "/" + std::string(symbol(p.marketspace)) +
                                                   " does not match the marketspace pricing mode");
    }
    if (p.amount < Money()) {
      throw Error(ErrorCode::kSchemaViolation, "negative amount for " + p.instance_type);
    }
    if (!seen.emplace(p.instance_type, p.marketspace, p.variant).second) {
      throw Error(ErrorCode::kDuplicateEntry, "duplicate price (" + p.instance_type + ", " +
                                                  std::string(symbol(p.marketspace)) + ", " + p.variant + ")");
    }
    price_index_[it->second][index_of(p.marketspace)].push_back(i);
  }
}

const InstanceType* Catalog::find(std::string_view name) const {
  const auto it = type_index_.find(name);
  return it == type_index_.end() ? nullptr : &types_[it->second];
}

const InstanceType& Catalog::at(std::string_view name) const {
  const auto* t = find(name);
  if (t == nullptr) throw Error(ErrorCode::kDanglingReference, "unknown instance type '" + std::string(name) + "'");
  return *t;
}

std::vector<const PriceEntry*> Catalog::prices_for(std::string_view type, Marketspace m) const {
  std::vector<const PriceEntry*> out;
  const auto it = type_index_.find(type);
  if (it == type_index_.end()) return out;
  for (std::size_t i : price_index_[it->second][index_of(m)]) out.push_back(&prices_[i]);
  return out;
}

std::vector<std::string> Catalog::variants(Marketspace m) const {
  std::set<std::string> names;
  for (const auto& p : prices_) {
    if (p.marketspace == m) names.insert(p.variant);
  }
  return {names.begin(), names.end()};
}

namespace {

enum class Section { kNone, kCostModel, kInstanceTypes, kPrices };

class CatalogParser {
 public:
  explicit CatalogParser(std::string_view source) : source_(source) {}

  Catalog parse(std::string_view text) {
    detail::LineReader reader(text);
    std::string_view raw;
    while (reader.next(raw)) {
      line_ = reader.line_number();
      const auto line = detail::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      if (line.front() == '[') {
        open_section(line);
        continue;
      }
      switch (section_) {
        case Section::kNone: fail("record outside of any section");
        case Section::kCostModel: cost_model_entry(line); break;
        case Section::kInstanceTypes:
        case Section::kPrices: record(line); break;
      }
    }
    if (!saw_types_) fail_at(0, "missing [instance_types] section");
    if (!saw_prices_) fail_at(0, "missing [prices] section");
    return Catalog(std::move(types_), std::move(prices_), model_);
  }

 private:
  [[noreturn]] void fail(const std::string& what, ErrorCode code = ErrorCode::kSchemaViolation) const {
    throw Error(code, std::string(source_) + ":" + std::to_string(line_) + ": " + what);
  }
  [[noreturn]] void fail_at(std::size_t line, const std::string& what) const {
    throw Error(ErrorCode::kSchemaViolation, std::string(source_) + ":" + std::to_string(line) + ": " + what);
  }

  void open_section(std::string_view line) {
    if (line.back() != ']') fail("unterminated section header");
    const auto name = detail::trim(line.substr(1, line.size() - 2));
    header_.clear();
    if (name == "cost_model") {
      section_ = Section::kCostModel;
    } else if (name == "instance_types") {
      section_ = Section::kInstanceTypes;
      saw_types_ = true;
    } else if (name == "prices") {
      section_ = Section::kPrices;
      saw_prices_ = true;
    } else {
      fail("unknown section '" + std::string(name) + "'");
    }
  }

  void cost_model_entry(std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value in [cost_model]");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key == "hours_per_month") {
      const auto v = detail::parse_int(value);
      if (!v || *v <= 0) fail("field 'hours_per_month': expected a positive integer");
      model_.hours_per_month = static_cast<int>(*v);
    } else if (key.starts_with("rate.")) {
      const auto bucket = parse_bucket(key.substr(5));
      if (!bucket) fail("unknown interruption bucket in '" + std::string(key) + "'");
      const auto v = detail::parse_double(value);
      if (!v || *v < 0.0 || *v > 1.0) fail("field '" + std::string(key) + "': expected a rate in [0, 1]");
      model_.bucket_rate[static_cast<std::size_t>(*bucket)] = *v;
    } else if (key == "penalty_usd") {
      const auto v = Money::parse(value);
      if (!v || *v < Money()) fail("field 'penalty_usd': expected a non-negative decimal");
      model_.penalty = *v;
    } else {
      fail("unknown [cost_model] key '" + std::string(key) + "'");
    }
  }

  void record(std::string_view line) {
    auto fields = detail::split(line, ',');
    if (header_.empty()) {
      for (auto f : fields) header_.emplace_back(f);
      check_header();
      return;
    }
    if (fields.size() != header_.size()) {
      fail("expected " + std::to_string(header_.size()) + " fields, found " + std::to_string(fields.size()));
    }
    if (section_ == Section::kInstanceTypes) {
      instance_type(fields);
    } else {
      price(fields);
    }
  }

  void check_header() {
    static const std::vector<std::string> kTypeColumns = {"name", "vcpu", "clock_mhz_per_vcpu", "memory_gib",
                                                          "interruption_bucket"};
    static const std::vector<std::string> kPriceColumns = {"instance_type", "marketspace", "variant", "unit",
                                                           "amount_usd"};
    const auto& required = section_ == Section::kInstanceTypes ? kTypeColumns : kPriceColumns;
    for (const auto& column : required) {
      if (std::find(header_.begin(), header_.end(), column) == header_.end()) {
        fail("header is missing column '" + column + "'");
      }
    }
  }

  std::string_view field(const std::vector<std::string_view>& fields, std::string_view column) const {
    const auto it = std::find(header_.begin(), header_.end(), column);
    return fields[static_cast<std::size_t>(it - header_.begin())];
  }

  void instance_type(const std::vector<std::string_view>& fields) {
    InstanceType t;
    t.name = std::string(field(fields, "name"));
    if (t.name.empty()) fail("field 'name': empty");
    const auto vcpu = detail::parse_int(field(fields, "vcpu"));
    if (!vcpu || *vcpu <= 0) fail("field 'vcpu': expected a positive integer");
    t.vcpu = static_cast<int>(*vcpu);
    const auto clock = detail::parse_double(field(fields, "clock_mhz_per_vcpu"));
    if (!clock || !(*clock > 0.0)) fail("field 'clock_mhz_per_vcpu': expected a positive number");
    t.clock_mhz_per_vcpu = *clock;
    const auto memory = detail::parse_double(field(fields, "memory_gib"));
    if (!memory || !(*memory > 0.0)) fail("field 'memory_gib': expected a positive number");
    t.memory_gib = *memory;
    const auto bucket = parse_bucket(field(fields, "interruption_bucket"));
    if (!bucket) fail("field 'interruption_bucket': unknown bucket");
    t.interruption_bucket = *bucket;
    if (!type_names_.insert(t.name).second) {
      fail("instance type '" + t.name + "' declared twice", ErrorCode::kDuplicateEntry);
    }
    types_.push_back(std::move(t));
  }

  void price(const std::vector<std::string_view>& fields) {
    PriceEntry p;
    p.instance_type = std::string(field(fields, "instance_type"));
    if (!type_names_.contains(p.instance_type)) {
      fail("price references undeclared instance type '" + p.instance_type + "'", ErrorCode::kDanglingReference);
    }
    const auto market = parse_marketspace(field(fields, "marketspace"));
    if (!market) fail("field 'marketspace': unknown marketspace '" + std::string(field(fields, "marketspace")) + "'");
    p.marketspace = *market;
    p.variant = std::string(field(fields, "variant"));
    if (p.variant.empty()) p.variant = "default";
    const auto unit = field(fields, "unit");
    if (unit == "per_hour") {
      p.unit = PriceUnit::kPerHour;
    } else if (unit == "per_term") {
      p.unit = PriceUnit::kPerTerm;
    } else {
      fail("field 'unit': expected per_hour or per_term");
    }
    if ((p.unit == PriceUnit::kPerTerm) != is_per_term(p.marketspace)) {
      fail("field 'unit': does not match the pricing mode of " + std::string(symbol(p.marketspace)));
    }
    const auto amount = Money::parse(field(fields, "amount_usd"));
    if (!amount || *amount < Money()) fail("field 'amount_usd': expected a non-negative decimal");
    p.amount = *amount;
    if (!price_keys_.emplace(p.instance_type, p.marketspace, p.variant).second) {
      fail("duplicate price (" + p.instance_type + ", " + std::string(symbol(p.marketspace)) + ", " + p.variant + ")",
           ErrorCode::kDuplicateEntry);
    }
    prices_.push_back(std::move(p));
  }

  std::string_view source_;
  std::size_t line_ = 0;
  Section section_ = Section::kNone;
  bool saw_types_ = false;
  bool saw_prices_ = false;
  std::vector<std::string> header_;
  std::vector<InstanceType> types_;
  std::vector<PriceEntry> prices_;
  std::set<std::string, std::less<>> type_names_;
  std::set<std::tuple<std::string, Marketspace, std::string>> price_keys_;
  CostModel model_;
};

}  // namespace

Catalog parse_catalog(std::string_view text, std::string_view source_name) {
  return CatalogParser(source_name).parse(text);
}

Catalog load_catalog(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::kMissingFile, "catalog '" + path.string() + "' does not exist");
  }
  const auto text = detail::read_file(path.string());
  return parse_catalog(text, path.string());
}

double penalty_per_hour(const InstanceType& instance, const CostModel& model) {
  return model.hourly_rate(instance.interruption_bucket) * model.penalty.usd();
}

namespace {

Money cheapest(const std::vector<const PriceEntry*>& entries, const VariantFilter& filter, bool apply_filter,
               const InstanceType& instance, Marketspace m) {
  std::optional<Money> best;
  for (const auto* e : entries) {
    if (apply_filter && filter.reservation_variant && e->variant != *filter.reservation_variant) continue;
    if (!best || e->amount < *best) best = e->amount;
  }
  if (!best) {
    throw Error(ErrorCode::kNoPrice, "no price for " + instance.name + " on " + std::string(symbol(m)));
  }
  return *best;
}

}  // namespace

Money effective_hourly_cost(const InstanceType& instance, Marketspace marketspace, const CostModel& model,
                            const Catalog& catalog, const VariantFilter& filter) {
  if (is_per_term(marketspace)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(symbol(marketspace)) + " is priced per term, not per hour");
  }
  Money price = cheapest(catalog.prices_for(instance.name, marketspace), filter, false, instance, marketspace);
  if (info(marketspace).interruptible) {
    // Rounded to the micro-dollar so that planner arithmetic stays exact.
    const double penalty_micros =
        model.hourly_rate(instance.interruption_bucket) * static_cast<double>(model.penalty.micros());
    price += Money::from_micros(std::llround(penalty_micros));
  }
  return price;
}

Money term_fee(const InstanceType& instance, Marketspace marketspace, const Catalog& catalog,
               const VariantFilter& filter) {
  if (!is_per_term(marketspace)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(symbol(marketspace)) + " is priced per hour, not per term");
  }
  return cheapest(catalog.prices_for(instance.name, marketspace), filter, true, instance, marketspace);
}

}  // namespace cloudfolio
