#include "spider_data.h"

namespace hpsql::testing {

const CatalogSet& spider_catalogs() {
  static const CatalogSet catalogs(parse_schema_catalogs(read_file(spider_path("tables.json"))));
  return catalogs;
}

const std::vector<Example>& spider_dev() {
  static const std::vector<Example> examples = parse_examples(read_file(spider_path("dev.json")), spider_catalogs());
  return examples;
}

const SchemaCatalog& concert_singer() { return spider_catalogs().at("concert_singer"); }

}  // namespace hpsql::testing
