/** Payload shapes of the statviz JSON API. */
export {};
