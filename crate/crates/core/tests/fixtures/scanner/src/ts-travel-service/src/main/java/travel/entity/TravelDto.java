package travel.entity;

public class TravelDto {

    private static final String TEMPLATE = """
        @RestController
        class Fake {
            @PostMapping("/text-block")
            void nope() {}
        }
        """;

    private String tripId;

    public String getTripId() {
        return tripId;
    }
}
