#ifndef DIGHOLO_C_API_H
#define DIGHOLO_C_API_H

#include <stdint.h>

#if defined(_WIN32)
#define DIGHOLO_API __declspec(dllexport)
#else
#define DIGHOLO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct digholo_complex64 {
  float re;
  float im;
} digholo_complex64;

enum {
  DIGHOLO_ERROR_SUCCESS = 0,
  DIGHOLO_ERROR_ERROR = 1,
  DIGHOLO_ERROR_INVALIDHANDLE = 2,
  DIGHOLO_ERROR_NULLPOINTER = 3,
  DIGHOLO_ERROR_SETFRAMEBUFFERDISABLED = 4,
  DIGHOLO_ERROR_INVALIDDIMENSION = 5,
  DIGHOLO_ERROR_INVALIDPOLARISATION = 6,
  DIGHOLO_ERROR_INVALIDAXIS = 7,
  DIGHOLO_ERROR_INVALIDARGUMENT = 8,
  DIGHOLO_ERROR_MEMORYALLOCATION = 9,
  DIGHOLO_ERROR_FILENOTCREATED = 10,
  DIGHOLO_ERROR_FILENOTFOUND = 11
};

/* handles */
DIGHOLO_API int digholo_create(void);
DIGHOLO_API int digholo_destroy(int handle);

/* configuration */
DIGHOLO_API int digholo_config_backup_save(int handle);
DIGHOLO_API int digholo_config_backup_load(int handle);

DIGHOLO_API int digholo_config_set_frame_dimensions(int handle, int width, int height);
DIGHOLO_API int digholo_config_get_frame_dimensions(int handle, int* width, int* height);
DIGHOLO_API int digholo_config_set_frame_width(int handle, int width);
DIGHOLO_API int digholo_config_get_frame_width(int handle);
DIGHOLO_API int digholo_config_set_frame_height(int handle, int height);
DIGHOLO_API int digholo_config_get_frame_height(int handle);
DIGHOLO_API int digholo_config_set_frame_pixel_size(int handle, float pixelSize);
DIGHOLO_API float digholo_config_get_frame_pixel_size(int handle);
DIGHOLO_API int digholo_config_set_pol_count(int handle, int polCount);
DIGHOLO_API int digholo_config_get_pol_count(int handle);

DIGHOLO_API int digholo_config_set_fft_window_size(int handle, int width, int height);
DIGHOLO_API int digholo_config_get_fft_window_size(int handle, int* width, int* height);
/* per-axis setters return the size actually set (multiple of 16), 0 on error */
DIGHOLO_API int digholo_config_set_fft_window_size_x(int handle, int width);
DIGHOLO_API int digholo_config_get_fft_window_size_x(int handle);
DIGHOLO_API int digholo_config_set_fft_window_size_y(int handle, int height);
DIGHOLO_API int digholo_config_get_fft_window_size_y(int handle);
DIGHOLO_API int digholo_config_set_fourier_window_radius(int handle, float radius);
DIGHOLO_API float digholo_config_get_fourier_window_radius(int handle);
DIGHOLO_API int digholo_config_set_ifft_resolution_mode(int handle, int mode);
DIGHOLO_API int digholo_config_get_ifft_resolution_mode(int handle);
DIGHOLO_API int digholo_config_set_fill_factor_correction_enabled(int handle, int enabled);
DIGHOLO_API int digholo_config_get_fill_factor_correction_enabled(int handle);

/* axis 0 = x, 1 = y */
DIGHOLO_API int digholo_config_set_beam_centre(int handle, int axis, int pol, float value);
DIGHOLO_API float digholo_config_get_beam_centre(int handle, int axis, int pol);
DIGHOLO_API int digholo_config_set_tilt(int handle, int axis, int pol, float value);
DIGHOLO_API float digholo_config_get_tilt(int handle, int axis, int pol);
DIGHOLO_API int digholo_config_set_defocus(int handle, int pol, float value);
DIGHOLO_API float digholo_config_get_defocus(int handle, int pol);
DIGHOLO_API int digholo_config_set_basis_waist(int handle, int pol, float value);
DIGHOLO_API float digholo_config_get_basis_waist(int handle, int pol);
DIGHOLO_API int digholo_config_set_pol_lock_tilt(int handle, int enabled);
DIGHOLO_API int digholo_config_get_pol_lock_tilt(int handle);
DIGHOLO_API int digholo_config_set_pol_lock_defocus(int handle, int enabled);
DIGHOLO_API int digholo_config_get_pol_lock_defocus(int handle);
DIGHOLO_API int digholo_config_set_pol_lock_basis_waist(int handle, int enabled);
DIGHOLO_API int digholo_config_get_pol_lock_basis_waist(int handle);

DIGHOLO_API int digholo_config_set_basis_group_count(int handle, int groupCount);
DIGHOLO_API int digholo_config_get_basis_group_count(int handle);
DIGHOLO_API int digholo_config_set_basis_type(int handle, int type);
DIGHOLO_API int digholo_config_get_basis_type(int handle);
DIGHOLO_API int digholo_config_set_basis_type_hg(int handle);
DIGHOLO_API int digholo_config_set_basis_type_lg(int handle);
/* transform is modeCountOut x modeCountIn, row-major; copied */
DIGHOLO_API int digholo_config_set_basis_type_custom(int handle, int modeCountIn, int modeCountOut,
                                                     const digholo_complex64* transform);

DIGHOLO_API int digholo_config_set_wavelength_centre(int handle, float lambda);
DIGHOLO_API float digholo_config_get_wavelength_centre(int handle);
DIGHOLO_API int digholo_config_set_wavelengths(int handle, const float* lambdas, int lambdaCount);
DIGHOLO_API int digholo_config_set_wavelengths_linear_frequency(int handle, float lambdaStart,
                                                                float lambdaStop, int lambdaCount);
/* returns the wavelength axis of the last processed batch */
DIGHOLO_API const float* digholo_config_get_wavelengths(int handle, int* lambdaCount);
/* inout 0 = input, 1 = output; ordering 0 = fast, 1 = slow */
DIGHOLO_API int digholo_config_set_wavelength_ordering(int handle, int inout, int ordering);
DIGHOLO_API int digholo_config_get_wavelength_ordering(int handle, int inout);

DIGHOLO_API int digholo_config_set_auto_align_tilt(int handle, int enabled);
DIGHOLO_API int digholo_config_get_auto_align_tilt(int handle);
DIGHOLO_API int digholo_config_set_auto_align_beam_centre(int handle, int enabled);
DIGHOLO_API int digholo_config_get_auto_align_beam_centre(int handle);
DIGHOLO_API int digholo_config_set_auto_align_defocus(int handle, int enabled);
DIGHOLO_API int digholo_config_get_auto_align_defocus(int handle);
DIGHOLO_API int digholo_config_set_auto_align_basis_waist(int handle, int enabled);
DIGHOLO_API int digholo_config_get_auto_align_basis_waist(int handle);
DIGHOLO_API int digholo_config_set_auto_align_fourier_window_radius(int handle, int enabled);
DIGHOLO_API int digholo_config_get_auto_align_fourier_window_radius(int handle);
DIGHOLO_API int digholo_config_set_auto_align_tol(int handle, float tol);
DIGHOLO_API float digholo_config_get_auto_align_tol(int handle);
DIGHOLO_API int digholo_config_set_auto_align_mode(int handle, int mode);
DIGHOLO_API int digholo_config_get_auto_align_mode(int handle);
DIGHOLO_API int digholo_config_set_auto_align_goal_idx(int handle, int goal);
DIGHOLO_API int digholo_config_get_auto_align_goal_idx(int handle);
DIGHOLO_API int digholo_config_set_auto_align_pol_independence(int handle, int enabled);
DIGHOLO_API int digholo_config_get_auto_align_pol_independence(int handle);
DIGHOLO_API int digholo_config_set_auto_align_basis_mul_conj_trans(int handle, int enabled);
DIGHOLO_API int digholo_config_get_auto_align_basis_mul_conj_trans(int handle);

DIGHOLO_API int digholo_config_set_thread_count(int handle, int threads);
DIGHOLO_API int digholo_config_get_thread_count(int handle);
DIGHOLO_API int digholo_config_set_verbosity(int handle, int verbosity);
DIGHOLO_API int digholo_config_get_verbosity(int handle);
DIGHOLO_API int digholo_config_set_fftw_plan_mode(int handle, int mode);
DIGHOLO_API int digholo_config_get_fftw_plan_mode(int handle);
DIGHOLO_API int digholo_fftw_wisdom_forget(void);
DIGHOLO_API int digholo_fftw_wisdom_filename(const char* filename);

DIGHOLO_API int digholo_config_set_batch_count(int handle, int batchCount);
DIGHOLO_API int digholo_config_get_batch_count(int handle);
DIGHOLO_API int digholo_config_set_avg_count(int handle, int avgCount);
DIGHOLO_API int digholo_config_get_avg_count(int handle);
DIGHOLO_API int digholo_config_set_avg_mode(int handle, int avgMode);
DIGHOLO_API int digholo_config_get_avg_mode(int handle);

/* calibration */
DIGHOLO_API int digholo_config_set_batch_calibration(int handle, const digholo_complex64* cal,
                                                     int polCount, int batchCount);
DIGHOLO_API int digholo_config_set_batch_calibration_from_file(int handle, const char* filename,
                                                               int polCount, int batchCount);
DIGHOLO_API const digholo_complex64* digholo_config_get_batch_calibration(int handle, int* polCount,
                                                                          int* batchCount);
DIGHOLO_API int digholo_config_set_batch_calibration_enabled(int handle, int enabled);
DIGHOLO_API int digholo_config_get_batch_calibration_enabled(int handle);

DIGHOLO_API int digholo_config_set_ref_calibration_intensity(int handle, const uint16_t* cal,
                                                             int lambdaCount, int width, int height);
DIGHOLO_API int digholo_config_set_ref_calibration_field(int handle, const digholo_complex64* cal,
                                                         int lambdaCount, int width, int height);
DIGHOLO_API int digholo_config_set_ref_calibration_from_file(int handle, const char* filename,
                                                             int lambdaCount, int width, int height);
DIGHOLO_API int digholo_config_set_ref_calibration_enabled(int handle, int enabled);
DIGHOLO_API int digholo_config_get_ref_calibration_enabled(int handle);
DIGHOLO_API const digholo_complex64* digholo_config_get_ref_calibration_fields(
    int handle, int* lambdaCount, int* polCount, const float** xAxis, const float** yAxis,
    int* width, int* height);

/* frames */
DIGHOLO_API int digholo_set_frame_buffer(int handle, const float* frames);
DIGHOLO_API int digholo_set_frame_buffer_uint16(int handle, const uint16_t* frames, int transpose);
DIGHOLO_API int digholo_set_frame_buffer_from_file(int handle, const char* filename);
DIGHOLO_API const float* digholo_get_frame_buffer(int handle);
DIGHOLO_API const uint16_t* digholo_get_frame_buffer_uint16(int handle);

DIGHOLO_API int digholo_set_batch(int handle, int batchCount, const float* frames);
DIGHOLO_API int digholo_set_batch_avg(int handle, int batchCount, const float* frames, int avgCount,
                                      int avgMode);
DIGHOLO_API int digholo_set_batch_uint16(int handle, int batchCount, const uint16_t* frames,
                                         int transpose);
DIGHOLO_API int digholo_set_batch_avg_uint16(int handle, int batchCount, const uint16_t* frames,
                                             int avgCount, int avgMode, int transpose);

/* processing */
DIGHOLO_API int digholo_process_fft(int handle);
DIGHOLO_API int digholo_process_ifft(int handle);
DIGHOLO_API int digholo_process_remove_tilt(int handle);
DIGHOLO_API int digholo_process_basis_extract_coefs(int handle);
/* coefficients are batchCount x polCount x modeCount; null when no basis is set */
DIGHOLO_API const digholo_complex64* digholo_process_batch(int handle, int* batchCount,
                                                           int* modeCount, int* polCount);
DIGHOLO_API const digholo_complex64* digholo_process_batch_frequency_sweep_linear(
    int handle, float lambdaStart, float lambdaStop, int lambdaCount, int* batchCount,
    int* modeCount, int* polCount);
DIGHOLO_API const digholo_complex64* digholo_process_batch_wavelength_sweep_arbitrary(
    int handle, const float* wavelengths, int lambdaCount, int* batchCount, int* modeCount,
    int* polCount);
DIGHOLO_API const digholo_complex64* digholo_basis_get_coefs(int handle, int* batchCount,
                                                             int* modeCount, int* polCount);
DIGHOLO_API int digholo_process_last_error(int handle);

/* results */
DIGHOLO_API const digholo_complex64* digholo_get_fields(int handle, int* batchCount, int* polCount,
                                                        const float** xAxis, const float** yAxis,
                                                        int* width, int* height);
DIGHOLO_API int digholo_get_fields16(int handle, const int16_t** fieldR, const int16_t** fieldI,
                                     const float** fieldScale, int* batchCount, int* polCount,
                                     const float** xAxis, const float** yAxis, int* width,
                                     int* height);
DIGHOLO_API const digholo_complex64* digholo_basis_get_fields(int handle, int* modeCount,
                                                              int* polCount, const float** xAxis,
                                                              const float** yAxis, int* width,
                                                              int* height);
DIGHOLO_API const digholo_complex64* digholo_get_fourier_plane_full(int handle, int* batchCount,
                                                                    int* polCount, int* width,
                                                                    int* height);
DIGHOLO_API const digholo_complex64* digholo_get_fourier_plane_window(int handle, int* batchCount,
                                                                      int* polCount, int* width,
                                                                      int* height);
/* parameters: paramCount x polCount x totalCount */
DIGHOLO_API int digholo_batch_get_summary(int handle, int plane, int* paramCount, int* totalCount,
                                          int* polCount, const float** parameters,
                                          const float** totalIntensity, const float** xAxis,
                                          const float** yAxis, int* width, int* height);

/* alignment and metrics */
DIGHOLO_API float digholo_auto_align(int handle);
DIGHOLO_API int digholo_auto_align_calc_metrics(int handle);
/* returns metricIdx values for every wavelength plus the average (last) */
DIGHOLO_API const float* digholo_auto_align_get_metrics(int handle, int metricIdx,
                                                        int* lambdaCount);
DIGHOLO_API float digholo_auto_align_get_metric(int handle, int metricIdx);

/* diagnostics */
DIGHOLO_API const unsigned char* digholo_get_viewport(int handle, int displayMode,
                                                      int forceProcessing, int* width, int* height,
                                                      const char** windowString);
DIGHOLO_API int digholo_get_viewport_to_file(int handle, int displayMode, int forceProcessing,
                                             int* width, int* height, const char** windowString,
                                             const char* filename);
/* info receives 6 rates in Hz: fft, ifft, apply tilt, basis, overlap, total */
DIGHOLO_API float digholo_benchmark(int handle, float goalDuration, float* info);
DIGHOLO_API int digholo_benchmark_estimate_thread_count_optimal(int handle, float goalDuration);

DIGHOLO_API int digholo_console_redirect_to_file(const char* filename);
DIGHOLO_API int digholo_console_restore(void);

DIGHOLO_API int digholo_run_batch_from_config_file(const char* filename);

/* simulator: for every pointer argument, a null value selects the default and is
   replaced by a pointer to the resolved values held with the frames */
DIGHOLO_API float* digholo_frame_simulator_create(
    int frameCount, int* frameWidth, int* frameHeight, float* pixelSize, int polCount,
    float** refTiltX, float** refTiltY, float** refDefocus, float** refWaist,
    float** refBeamCentreX, float** refBeamCentreY, digholo_complex64** refAmplitude,
    int beamGroupCount, float** beamWaist, digholo_complex64** beamCoefs, float** beamCentreX,
    float** beamCentreY, int cameraPixelLevelCount, int fillFactorCorrection, float** wavelengths,
    int wavelengthCount, int wavelengthOrdering, int printToConsole, uint16_t** frameBufferUint16,
    const char* filename);
DIGHOLO_API float* digholo_frame_simulator_create_simple(int frameCount, int frameWidth,
                                                         int frameHeight, float pixelSize,
                                                         int polCount, float wavelength,
                                                         int printToConsole);
DIGHOLO_API int digholo_frame_simulator_destroy(float* frameBuffer);

#ifdef __cplusplus
}
#endif

#endif
