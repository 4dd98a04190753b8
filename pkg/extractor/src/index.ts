export { Backbone, FEATURE_DIM, BackboneConfig } from './backbone';
export { extractFeatures, ExtractionSummary } from './extract';
export { decodeImage, resizeBilinear, RgbImage } from './image';
export { loadManifest, SampleRecord } from './manifest';
export {
  readAnnotationFile,
  readFeatureFile,
  writeAnnotationFile,
  writeFeatureFile,
  Annotation,
  FEATURE_MAGIC,
} from './storage';
export { fetchAnnotations, AuthError, VisionConfig, FetchSummary, HttpPostFn } from './vision';
