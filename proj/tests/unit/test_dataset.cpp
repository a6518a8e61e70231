#include <filesystem>
#include <string>

#include "doctest.h"
#include "resperf/dataset.hpp"
#include "resperf/device_profile.hpp"
#include "resperf/synth_bench.hpp"

using namespace resperf;

namespace {

const std::string kHeader =
    "batch_size,matrix_size,kernel_size,channels_in,channels_out,strides,padding,activation,use_bias,"
    "t_pre,t_exe,t_post\n";

std::string ingest_error(const std::string& text) {
  try {
    parse_dataset_csv(text);
  } catch (const IngestError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("CSV round trip preserves every field") {
  const auto ds = generate_dataset(LayerKind::Convolution, 100, 5, *find_preset("p2000"));
  const auto text = format_dataset_csv(ds);
  CHECK(parse_dataset_csv(text) == ds);

  const auto path = std::filesystem::temp_directory_path() / "resperf_dataset_roundtrip.csv";
  save_dataset(ds, path);
  CHECK(load_dataset(path) == ds);
  std::filesystem::remove(path);
}

TEST_CASE("ingestion errors name the row and column") {
  const std::string good = "1,8,3,2,2,1,0,0,0,0.5,0.25,0.125\n";
  const std::string bad_batch = "0,8,3,2,2,1,0,0,0,0.5,0.25,0.125\n";
  CHECK(ingest_error(kHeader + good + good + bad_batch) == "row 3: batch_size below 1");

  try {
    parse_dataset_csv(kHeader + good + good + bad_batch);
  } catch (const IngestError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == "batch_size");
  }

  const std::string no_post =
      "batch_size,matrix_size,kernel_size,channels_in,channels_out,strides,padding,activation,use_bias,"
      "t_pre,t_exe\n1,8,3,2,2,1,0,0,0,0.5,0.25\n";
  const auto msg = ingest_error(no_post);
  CHECK(msg.find("t_post") != std::string::npos);

  CHECK(ingest_error(kHeader + "1,8,x,2,2,1,0,0,0,0.5,0.25,0.125\n") ==
        "row 1: kernel_size: 'x' is not an integer");
  CHECK(ingest_error(kHeader + "1,8,3,2,2,1,0,0,0,0.5,abc,0.125\n") ==
        "row 1: t_exe: 'abc' is not a number");
  CHECK(ingest_error(kHeader + "1,8,3,2,2,1,0,0\n").find("row 1: expected") == 0);
  CHECK(ingest_error("# kind: lstm\n" + kHeader + good).find("unknown layer kind") != std::string::npos);
  CHECK(ingest_error("# schema: resperf-features/0\n" + kHeader + good).find("schema version") !=
        std::string::npos);
  CHECK(ingest_error(kHeader) == "header: dataset has no rows");
}

TEST_CASE("kind is inferred from the header when metadata is absent") {
  const auto ds = parse_dataset_csv(
      "batch_size,dim_input,dim_output,activation,use_bias,t_pre,t_exe,t_post\n2,10,20,1,0,1,2,3\n",
      "imported.csv");
  CHECK(ds.kind == LayerKind::Dense);
  CHECK(ds.rows.at(0).config == LayerConfig::dense(2, 10, 20, 1, 0));
  CHECK(ds.provenance.imported_from == "imported.csv");
  CHECK_FALSE(ds.provenance.seed.has_value());
}

TEST_CASE("features and targets are laid out in schema order") {
  const auto ds = parse_dataset_csv(kHeader + "1,8,3,2,5,1,0,1,0,0.5,0.25,0.125\n");
  const auto x = ds.features();
  CHECK(x.shape() == Tensor::Shape{1, 9});
  CHECK(x[4] == 5.0);
  CHECK(ds.targets(PhaseKind::Postprocess) == std::vector<double>{0.125});
  const auto sub = ds.subset({0, 0});
  CHECK(sub.size() == 2);
}
